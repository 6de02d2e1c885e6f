#include "cerenkov_fiber/hamiltonian.hpp"

#include <cmath>

namespace fiber {

namespace {

Vector coupling_vector(const MomentumGrid& grid, const FormFactor& ff) {
  Vector c(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto& mode = grid.mode(m);
    c[static_cast<Eigen::Index>(m)] = std::sqrt(mode.vol) * ff.value(mode.norm());
  }
  return c;
}

Vector free_diagonal_from(const std::array<Vector, 3>& pf, const Vector& hf, const Vec3& P) {
  const Vector dx = P.x() - pf[0].array();
  const Vector dy = P.y() - pf[1].array();
  const Vector dz = P.z() - pf[2].array();
  return 0.5 * (dx.array().square() + dy.array().square() + dz.array().square()).matrix() + hf;
}

}  // namespace

Vector mode_weights(const MomentumGrid& grid, const std::function<double(const Mode&)>& w) {
  Vector out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t m = 0; m < grid.size(); ++m) out[static_cast<Eigen::Index>(m)] = w(grid.mode(m));
  return out;
}

std::array<Vector, 3> field_momentum_diagonals(const FockBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::array<Vector, 3> pf{Vector::Zero(dim), Vector::Zero(dim), Vector::Zero(dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vec3 sum = Vec3::Zero();
    for (const auto& mc : basis.state(static_cast<std::size_t>(i))) {
      sum += static_cast<double>(mc.count) * basis.grid().mode(mc.mode).k;
    }
    for (int a = 0; a < 3; ++a) pf[a][i] = sum[a];
  }
  return pf;
}

Vector field_energy_diagonal(const FockBasis& basis) {
  return number_weighted_diagonal(basis, mode_weights(basis.grid(), [](const Mode& m) {
    return m.norm();
  }));
}

Vector number_weighted_diagonal(const FockBasis& basis, const Vector& weight) {
  if (weight.size() != static_cast<Eigen::Index>(basis.grid().size())) {
    throw InvalidArgument("dGamma: weight vector must have one entry per mode");
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Vector d = Vector::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double s = 0.0;
    for (const auto& mc : basis.state(static_cast<std::size_t>(i))) s += mc.count * weight[mc.mode];
    d[i] = s;
  }
  return d;
}

std::array<SparseHermitianOperator, 3> build_field_momentum(const FockBasis& basis) {
  const auto pf = field_momentum_diagonals(basis);
  return {SparseHermitianOperator::from_diagonal(pf[0]),
          SparseHermitianOperator::from_diagonal(pf[1]),
          SparseHermitianOperator::from_diagonal(pf[2])};
}

SparseHermitianOperator build_field_energy(const FockBasis& basis) {
  return SparseHermitianOperator::from_diagonal(field_energy_diagonal(basis));
}

SparseHermitianOperator build_number_weighted(const FockBasis& basis, const Vector& weight) {
  return SparseHermitianOperator::from_diagonal(number_weighted_diagonal(basis, weight));
}

Vector free_fiber_diagonal(const FiberParams& params) {
  return free_diagonal_from(field_momentum_diagonals(params.basis),
                            field_energy_diagonal(params.basis), params.P);
}

SparseHermitianOperator build_free_fiber(const FiberParams& params) {
  return SparseHermitianOperator::from_diagonal(free_fiber_diagonal(params));
}

SparseHermitianOperator build_smeared_field(const FockBasis& basis, const Vector& coefficients) {
  const MomentumGrid& grid = basis.grid();
  if (coefficients.size() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("field: coefficient vector must have one entry per mode");
  }
  // Each state links to the states with one boson fewer; the mirrored entry
  // supplies the creation half.
  std::vector<SparseHermitianOperator::Triplet> half;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& low : basis.lowerings(i)) {
      const double v = std::sqrt(grid.mode(low.mode).vol) * coefficients[low.mode] * low.amplitude;
      if (v != 0.0) half.emplace_back(i, low.target, v);
    }
  }
  return SparseHermitianOperator::from_half_triplets(static_cast<std::int64_t>(basis.size()), half);
}

SparseHermitianOperator build_interaction(const FockBasis& basis, const FormFactor& ff) {
  return build_smeared_field(basis, mode_weights(basis.grid(), [&](const Mode& m) {
    return ff.value(m.norm());
  }));
}

SparseHermitianOperator build_interaction(const FiberParams& params) {
  return build_interaction(params.basis, params.form_factor);
}

SparseHermitianOperator build_fiber_hamiltonian(const FiberParams& params) {
  const auto free = build_free_fiber(params);
  if (params.g == 0.0) return free;
  return free.plus(build_interaction(params), params.g);
}

FiberModel::FiberModel(std::shared_ptr<const FockBasis> basis, FormFactor form_factor)
    : basis_(std::move(basis)), form_factor_(form_factor) {
  if (!basis_) throw InvalidArgument("model: basis is null");
  form_factor_.validate();
  interaction_ = build_interaction(*basis_, form_factor_);
  field_momentum_ = field_momentum_diagonals(*basis_);
  field_energy_ = field_energy_diagonal(*basis_);
  field_momentum_sq_ = (field_momentum_[0].array().square() + field_momentum_[1].array().square() +
                        field_momentum_[2].array().square())
                           .matrix();
  coupling_ = coupling_vector(basis_->grid(), form_factor_);
}

Vector FiberModel::free_diagonal(const Vec3& P) const {
  return free_diagonal_from(field_momentum_, field_energy_, P);
}

SparseHermitianOperator FiberModel::hamiltonian(const Vec3& P, double g) const {
  const auto free = SparseHermitianOperator::from_diagonal(free_diagonal(P));
  if (g == 0.0) return free;
  return free.plus(interaction_, g);
}

}  // namespace fiber
