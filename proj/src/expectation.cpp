#include "cerenkov_fiber/expectation.hpp"

#include <cmath>

namespace fiber {

namespace {

// |psi_s|^2 with the state renormalized when its norm is off.
Vector probabilities(const Vector& state, bool& renormalized) {
  const double n2 = state.squaredNorm();
  if (!(n2 > 0.0)) throw InvalidArgument("expectation: zero state");
  renormalized = std::abs(std::sqrt(n2) - 1.0) > kNormTolerance;
  Vector p = state.array().square();
  if (renormalized) p /= n2;
  return p;
}

void check_dimension(const FockBasis& basis, const Vector& state) {
  if (state.size() != static_cast<Eigen::Index>(basis.size())) {
    throw InvalidArgument("expectation: state dimension does not match the basis");
  }
}

}  // namespace

Expectation expect_number(const FockBasis& basis, const Vector& state, const Vector& weight) {
  check_dimension(basis, state);
  Expectation e;
  const Vector p = probabilities(state, e.renormalized);
  e.value = p.dot(number_weighted_diagonal(basis, weight));
  return e;
}

Vector restricted_number_weight(const MomentumGrid& grid, const ShellSpec& shell,
                                const ConeSpec* cone) {
  return mode_weights(grid, [&](const Mode& m) {
    const double chi = shell_weight(shell, m.norm());
    const double xi = cone ? cone_weight(*cone, m.k) : 1.0;
    return chi * chi * xi * xi;
  });
}

Vec3 expect_field_momentum(const FiberModel& model, const Vector& state) {
  check_dimension(model.basis(), state);
  const Vector p = state.array().square();
  return {p.dot(model.field_momentum()[0]), p.dot(model.field_momentum()[1]),
          p.dot(model.field_momentum()[2])};
}

double expect_field_energy(const FiberModel& model, const Vector& state) {
  check_dimension(model.basis(), state);
  return state.array().square().matrix().dot(model.field_energy());
}

double expect_field_momentum_sq(const FiberModel& model, const Vector& state) {
  check_dimension(model.basis(), state);
  return state.array().square().matrix().dot(model.field_momentum_sq());
}

Vector expect_creation(const FockBasis& basis, const Vector& state) {
  check_dimension(basis, state);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(basis.grid().size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double psi = state[static_cast<Eigen::Index>(i)];
    if (psi == 0.0) continue;
    for (const auto& low : basis.lowerings(i)) {
      out[low.mode] += psi * low.amplitude * state[low.target];
    }
  }
  return out;
}

double expect_smeared_field(const FockBasis& basis, const Vector& state, const Vector& coefficients) {
  const Vector creation = expect_creation(basis, state);
  double s = 0.0;
  for (std::size_t m = 0; m < basis.grid().size(); ++m) {
    s += std::sqrt(basis.grid().mode(m).vol) * coefficients[static_cast<Eigen::Index>(m)] *
         creation[static_cast<Eigen::Index>(m)];
  }
  return 2.0 * s;
}

GradientEstimate feynman_hellmann_grad(const FiberModel& model, const Vector& state, const Vec3& P,
                                       double residual, double tolerance) {
  GradientEstimate out;
  out.gradient = P - expect_field_momentum(model, state);
  out.residual_warning = residual > tolerance;
  return out;
}

GradientEstimate feynman_hellmann_grad(const FiberModel& model, const std::vector<Vector>& cluster,
                                       const Vec3& P, const std::vector<double>& residuals,
                                       double tolerance) {
  if (cluster.empty()) throw InvalidArgument("feynman-hellmann: empty cluster");
  GradientEstimate out;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    out.gradient += P - expect_field_momentum(model, cluster[i]);
    if (i < residuals.size() && residuals[i] > tolerance) out.residual_warning = true;
  }
  out.gradient /= static_cast<double>(cluster.size());
  return out;
}

}  // namespace fiber
