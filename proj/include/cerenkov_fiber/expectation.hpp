#pragma once

#include "cerenkov_fiber/hamiltonian.hpp"
#include "cerenkov_fiber/weights.hpp"

#include <vector>

namespace fiber {

/// An expectation value and whether the state had to be renormalized first.
struct Expectation {
  double value = 0.0;
  bool renormalized = false;
};

/// Relative deviation of ||psi|| from 1 above which states are renormalized.
inline constexpr double kNormTolerance = 1e-10;

/// <psi, dGamma(w) psi> for a per-mode weight.
Expectation expect_number(const FockBasis& basis, const Vector& state, const Vector& weight);

/// Per-mode weight chi_n(|k|)^2 xi(k-hat)^2; pass no cone for the shell number alone.
Vector restricted_number_weight(const MomentumGrid& grid, const ShellSpec& shell,
                                const ConeSpec* cone = nullptr);

Vec3 expect_field_momentum(const FiberModel& model, const Vector& state);
double expect_field_energy(const FiberModel& model, const Vector& state);
double expect_field_momentum_sq(const FiberModel& model, const Vector& state);

/// <psi, b+_m psi> for every mode (real states).
Vector expect_creation(const FockBasis& basis, const Vector& state);
/// <psi, (b+(f) + b(f)) psi> with b+(f) = sum_m sqrt(vol_m) f_m b+_m.
double expect_smeared_field(const FockBasis& basis, const Vector& state, const Vector& coefficients);

struct GradientEstimate {
  Vec3 gradient = Vec3::Zero();
  /// Set when any contributing state has eigen-residual above the tolerance.
  bool residual_warning = false;
};

/// Feynman-Hellmann gradient P - <P^f>.
GradientEstimate feynman_hellmann_grad(const FiberModel& model, const Vector& state, const Vec3& P,
                                       double residual = 0.0, double tolerance = 1e-9);
/// Average of P - <P^f> over a degenerate cluster of eigenvectors.
GradientEstimate feynman_hellmann_grad(const FiberModel& model, const std::vector<Vector>& cluster,
                                       const Vec3& P, const std::vector<double>& residuals,
                                       double tolerance);

}  // namespace fiber
