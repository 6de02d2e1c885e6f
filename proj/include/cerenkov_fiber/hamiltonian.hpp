#pragma once

#include "cerenkov_fiber/basis.hpp"
#include "cerenkov_fiber/form_factor.hpp"
#include "cerenkov_fiber/sparse_operator.hpp"

#include <array>
#include <functional>
#include <memory>

namespace fiber {

/// Total momentum P and coupling g of one fiber, with the basis and form
/// factor it is built on.
struct FiberParams {
  Vec3 P = Vec3::Zero();
  double g = 0.0;
  const FockBasis& basis;
  const FormFactor& form_factor;
};

/// Diagonal of H0_P: (P - sum n_m k_m)^2 / 2 + sum n_m |k_m| per basis state.
Vector free_fiber_diagonal(const FiberParams& params);
SparseHermitianOperator build_free_fiber(const FiberParams& params);

/// phi(rho) = sum_m sqrt(vol_m) rho(|k_m|) (b+_m + b_m).
SparseHermitianOperator build_interaction(const FiberParams& params);
SparseHermitianOperator build_interaction(const FockBasis& basis, const FormFactor& ff);

/// sum_m sqrt(vol_m) f_m (b+_m + b_m) for real per-mode coefficients f_m.
SparseHermitianOperator build_smeared_field(const FockBasis& basis, const Vector& coefficients);

/// H_P = H0_P + g phi(rho).
SparseHermitianOperator build_fiber_hamiltonian(const FiberParams& params);

/// Diagonals of the field momentum components sum n_m k_m.
std::array<Vector, 3> field_momentum_diagonals(const FockBasis& basis);
std::array<SparseHermitianOperator, 3> build_field_momentum(const FockBasis& basis);
/// sum n_m |k_m|.
Vector field_energy_diagonal(const FockBasis& basis);
SparseHermitianOperator build_field_energy(const FockBasis& basis);
/// dGamma(w): sum n_m w_m.
Vector number_weighted_diagonal(const FockBasis& basis, const Vector& weight);
SparseHermitianOperator build_number_weighted(const FockBasis& basis, const Vector& weight);
/// Per-mode weight vector from a function of the mode.
Vector mode_weights(const MomentumGrid& grid, const std::function<double(const Mode&)>& w);

/// Fiber pieces cached for repeated (P, g) evaluations on one basis.
/// Immutable after construction; safe to share across threads.
class FiberModel {
 public:
  FiberModel(std::shared_ptr<const FockBasis> basis, FormFactor form_factor);

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  const MomentumGrid& grid() const { return basis_->grid(); }
  const FormFactor& form_factor() const { return form_factor_; }
  std::size_t dimension() const { return basis_->size(); }

  const SparseHermitianOperator& interaction() const { return interaction_; }
  const std::array<Vector, 3>& field_momentum() const { return field_momentum_; }
  const Vector& field_energy() const { return field_energy_; }
  /// |sum n_m k_m|^2 per basis state.
  const Vector& field_momentum_sq() const { return field_momentum_sq_; }
  /// sqrt(vol_m) rho(|k_m|) per mode.
  const Vector& coupling() const { return coupling_; }

  Vector free_diagonal(const Vec3& P) const;
  SparseHermitianOperator hamiltonian(const Vec3& P, double g) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  FormFactor form_factor_;
  SparseHermitianOperator interaction_;
  std::array<Vector, 3> field_momentum_;
  Vector field_energy_;
  Vector field_momentum_sq_;
  Vector coupling_;
};

}  // namespace fiber
