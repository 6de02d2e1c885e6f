#include "cerenkov_fiber/virial.hpp"

#include <algorithm>
#include <cmath>

namespace fiber {

namespace {

Vec3 perpendicular(const Vec3& k, const Vec3& axis) {
  const Vec3 u = axis.normalized();
  return k - k.dot(u) * u;
}

double radial_cutoff(const DilationSpec& spec, double r) {
  if (spec.shell) return shell_weight(ShellSpec{*spec.shell}, r);
  return window_weight(spec.kappa, r);
}

double radial_cutoff_derivative(const DilationSpec& spec, double r) {
  if (spec.shell) return shell_weight_derivative(ShellSpec{*spec.shell}, r);
  return window_weight_derivative(spec.kappa, r);
}

struct Expectations {
  Vector probabilities;
  bool renormalized = false;
};

Expectations probabilities_of(const FockBasis& basis, const Vector& state) {
  if (state.size() != static_cast<Eigen::Index>(basis.size())) {
    throw InvalidArgument("virial: state dimension does not match the basis");
  }
  const double n2 = state.squaredNorm();
  if (!(n2 > 0.0)) throw InvalidArgument("virial: zero state");
  Expectations e;
  e.renormalized = std::abs(std::sqrt(n2) - 1.0) > kNormTolerance;
  e.probabilities = state.array().square() / n2;
  return e;
}

double coupling_expectation(const FiberModel& model, const Vector& state, const DilationSpec& spec,
                            double g) {
  if (g == 0.0) return 0.0;
  const auto& grid = model.grid();
  const Vector f = mode_weights(grid, [&](const Mode& m) {
    return dilated_form_factor(model.form_factor(), spec, m.k);
  });
  return g * expect_smeared_field(model.basis(), state / state.norm(), f);
}

}  // namespace

void DilationSpec::validate(const FormFactor& ff) const {
  if (shell) {
    if (*shell == 0) throw InvalidArgument("dilation: shell index n must be at least 1");
  } else if (std::isfinite(kappa)) {
    const double bound = std::max(ff.cutoff, 1.0);
    if (!(kappa > bound)) throw InvalidArgument("dilation: kappa must exceed max(cutoff, 1)");
  } else if (!(kappa > 0.0)) {
    throw InvalidArgument("dilation: kappa must be positive or infinite");
  }
  if (cone) cone->validate();
  if (!(perp_axis.norm() > 0.0)) throw InvalidArgument("dilation: perpendicular axis must be nonzero");
}

double DilationSpec::cutoff(const Vec3& k) const {
  const double r = k.norm();
  double F = radial_cutoff(*this, r);
  if (cone && r > 0.0) F *= cone_weight(*cone, k / r);
  return F;
}

double dilated_form_factor(const FormFactor& ff, const DilationSpec& spec, const Vec3& k) {
  const double r = k.norm();
  if (!(r > 0.0)) return 0.0;
  const double rho = ff.value(r);
  const double drho = ff.derivative(r);
  const double chi = radial_cutoff(spec, r);
  const double dchi = radial_cutoff_derivative(spec, r);
  const Vec3 k_hat = k / r;

  double xi = 1.0;
  double dxi_dcos = 0.0;
  double cos_cone = 0.0;
  Vec3 cone_axis = Vec3::UnitZ();
  if (spec.cone) {
    cone_axis = spec.cone->axis.normalized();
    cos_cone = std::clamp(k_hat.dot(cone_axis), -1.0, 1.0);
    xi = cone_weight_cos(*spec.cone, cos_cone);
    dxi_dcos = cone_weight_dcos(*spec.cone, cos_cone);
  }
  const double F = chi * xi;
  const double f_rho = F * rho;
  // Radial derivative of chi rho; xi does not depend on r.
  const double d_chi_rho = dchi * rho + chi * drho;

  if (spec.mode == DilationMode::parallel) {
    return -F * (r * xi * d_chi_rho + 1.5 * f_rho);
  }
  const Vec3 kp = perpendicular(k, spec.perp_axis);
  const double kp2 = kp.squaredNorm();
  // k_perp . grad f(r) = |k_perp|^2 / r f'(r); k_perp . grad cos = (k_perp.u - cos |k_perp|^2/r) / r.
  double generator = xi * d_chi_rho * kp2 / r;
  if (spec.cone) {
    const double kp_grad_cos = (kp.dot(cone_axis) - cos_cone * kp2 / r) / r;
    generator += chi * rho * dxi_dcos * kp_grad_cos;
  }
  return -F * (generator + f_rho);
}

std::function<double(const Vec3&)> dilated_form_factor(const FormFactor& ff, const DilationSpec& spec) {
  spec.validate(ff);
  return [ff, spec](const Vec3& k) { return dilated_form_factor(ff, spec, k); };
}

VirialResidual virial_residual(const FiberModel& model, const Vector& state, const Vec3& P, double g,
                               const DilationSpec& spec) {
  if (spec.shell || spec.cone) {
    throw InvalidArgument("virial: use sector_virial_residual for shell or cone cutoffs");
  }
  if (spec.mode != DilationMode::parallel) {
    throw InvalidArgument("virial: the window residual is defined for the parallel generator");
  }
  spec.validate(model.form_factor());
  const auto& basis = model.basis();
  const auto& grid = model.grid();
  const Expectations e = probabilities_of(basis, state);

  const Vector f2 = mode_weights(grid, [&](const Mode& m) {
    const double F = spec.cutoff(m.k);
    return F * F;
  });
  const Vector w_energy = f2.cwiseProduct(mode_weights(grid, [](const Mode& m) { return m.norm(); }));
  std::array<Vector, 3> dk;
  for (int a = 0; a < 3; ++a) {
    dk[a] = number_weighted_diagonal(
        basis, f2.cwiseProduct(mode_weights(grid, [a](const Mode& m) { return m.k[a]; })));
  }
  const auto& pf = model.field_momentum();

  VirialResidual out;
  out.renormalized = e.renormalized;
  out.field_energy_term = e.probabilities.dot(number_weighted_diagonal(basis, w_energy));
  Vector mixed = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (int a = 0; a < 3; ++a) mixed += dk[a].cwiseProduct(pf[a]);
  out.mixed_term = e.probabilities.dot(mixed);
  double pk = 0.0;
  for (int a = 0; a < 3; ++a) pk += P[a] * e.probabilities.dot(dk[a]);
  out.momentum_term = -pk;
  out.coupling_term = -coupling_expectation(model, state, spec, g);
  out.residual = out.field_energy_term + out.mixed_term + out.momentum_term + out.coupling_term;
  return out;
}

VirialResidual sector_virial_residual(const FiberModel& model, const Vector& state,
                                      const Vec3& grad_E, double g, const DilationSpec& spec) {
  if (!spec.shell) throw InvalidArgument("virial: sector residual needs a shell index");
  spec.validate(model.form_factor());
  const auto& basis = model.basis();
  const auto& grid = model.grid();
  const Expectations e = probabilities_of(basis, state);
  const bool perp = spec.mode == DilationMode::perpendicular;

  const Vector f2 = mode_weights(grid, [&](const Mode& m) {
    const double F = spec.cutoff(m.k);
    return F * F;
  });
  const Vector w_energy = f2.cwiseProduct(mode_weights(grid, [&](const Mode& m) {
    if (!perp) return m.norm();
    return perpendicular(m.k, spec.perp_axis).squaredNorm() / m.norm();
  }));
  double grad_term = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (grad_E[a] == 0.0) continue;
    const Vector w = f2.cwiseProduct(mode_weights(grid, [&](const Mode& m) {
      return perp ? perpendicular(m.k, spec.perp_axis)[a] : m.k[a];
    }));
    grad_term += grad_E[a] * e.probabilities.dot(number_weighted_diagonal(basis, w));
  }

  VirialResidual out;
  out.renormalized = e.renormalized;
  out.field_energy_term = e.probabilities.dot(number_weighted_diagonal(basis, w_energy));
  out.momentum_term = -grad_term;
  out.coupling_term = -coupling_expectation(model, state, spec, g);
  out.residual = out.field_energy_term + out.momentum_term + out.coupling_term;
  return out;
}

double energy_identity_residual(const FiberModel& model, const Vector& state, const Vec3& P, double g) {
  const Expectations e = probabilities_of(model.basis(), state);
  const Vector psi = state / state.norm();
  const double h = psi.dot(model.free_diagonal(P).cwiseProduct(psi)) +
                   g * model.interaction().expectation(psi);
  const double pf2 = e.probabilities.dot(model.field_momentum_sq());
  DilationSpec inf;
  const double dilated = coupling_expectation(model, psi, inf, g);
  const double phi = g * model.interaction().expectation(psi);
  return h - 0.5 * P.squaredNorm() + 0.5 * pf2 - dilated - phi;
}

}  // namespace fiber
