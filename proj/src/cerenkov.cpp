#include "cerenkov_fiber/cerenkov.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace fiber {

std::vector<double> resonance_momentum(double P, double E, double cos_theta) {
  if (!(std::abs(cos_theta) <= 1.0)) throw InvalidArgument("resonance: |cos theta| must be <= 1");
  const double P_abs = std::abs(P);
  const double b = 1.0 - P_abs * cos_theta;
  const double c = 0.5 * P_abs * P_abs - E;
  const double scale = std::max({b * b, std::abs(c), 1.0});
  double disc = b * b - 2.0 * c;
  if (std::abs(disc) <= 1e-14 * scale) disc = 0.0;
  if (disc < 0.0) return {};

  std::vector<double> roots;
  if (disc == 0.0) {
    roots.push_back(-b);
  } else {
    const double q = -b - std::copysign(std::sqrt(disc), b);
    roots.push_back(q);
    roots.push_back(q != 0.0 ? 2.0 * c / q : 0.0);
  }
  std::vector<double> out;
  const double zero_tol = 1e-14 * std::max(1.0, std::abs(b));
  for (double r : roots) {
    if (r < -zero_tol) continue;
    out.push_back(r > 0.0 ? r : 0.0);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<double> cerenkov_threshold(double P) {
  const double a = std::abs(P);
  if (!(a > 0.0)) throw InvalidArgument("threshold: |P| must be positive");
  if (a > 1.0) return 1.0 / a;
  return std::nullopt;
}

double golden_rule_rate(double P, double g, const FormFactor& ff) {
  ff.validate();
  const double a = std::abs(P);
  if (a <= 1.0 || g == 0.0) return 0.0;
  const double upper = std::min(2.0 * (a - 1.0), ff.cutoff);
  auto integrand = [&ff](double u) {
    const double rho = ff.value(u);
    return u * rho * rho;
  };
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kMaxDepth = 30;
  constexpr double kTol = 1e-12;
  // Split at the roll-off seam so each piece is smooth.
  const double seam = std::min(ff.plateau_end(), upper);
  double integral = gauss_kronrod<double, 61>::integrate(integrand, 0.0, seam, kMaxDepth, kTol);
  if (upper > seam) {
    integral += gauss_kronrod<double, 61>::integrate(integrand, seam, upper, kMaxDepth, kTol);
  }
  return 4.0 * kPi * kPi * g * g / a * integral;
}

double trial_bump(double z) {
  const double t = 1.0 - std::abs(z);
  return t > 0.0 ? smootherstep(t) : 0.0;
}

Vector trial_amplitudes(const MomentumGrid& grid, const Vec3& P, const TrialSpec& spec) {
  if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) {
    throw InvalidArgument("trial state: epsilon must be positive");
  }
  const double E = spec.energy.value_or(0.5 * P.squaredNorm());
  const double scale = 1.0 / std::sqrt(spec.epsilon);
  Vector eta(static_cast<Eigen::Index>(grid.size()));
  bool any = false;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto& mode = grid.mode(m);
    const double detuning = 0.5 * (P - mode.k).squaredNorm() + mode.norm() - E;
    const double h = trial_bump(detuning / spec.epsilon);
    eta[static_cast<Eigen::Index>(m)] = std::sqrt(mode.vol) * scale * h;
    any = any || h > 0.0;
  }
  if (!any) throw EmptyWindowError("trial state: no grid mode lies within epsilon of the resonance");
  return eta;
}

TrialState trial_state(const FockBasis& basis, const Vec3& P, const TrialSpec& spec) {
  if (basis.n_max() < 1) throw InvalidArgument("trial state: basis lacks the one-boson sector");
  const Vector eta = trial_amplitudes(basis.grid(), P, spec);
  TrialState out;
  out.state = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t m = 0; m < basis.grid().size(); ++m) {
    const double a = eta[static_cast<Eigen::Index>(m)];
    if (a == 0.0) continue;
    const auto idx = basis.one_boson_index(m);
    if (!idx) throw InvalidArgument("trial state: a resonant one-boson state is truncated away");
    out.state[static_cast<Eigen::Index>(*idx)] = a;
  }
  out.norm = out.state.norm();
  return out;
}

double decay_element(const MomentumGrid& grid, const Vector& mode_amplitudes, const FormFactor& ff,
                     double g) {
  if (mode_amplitudes.size() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("decay element: one amplitude per mode required");
  }
  double s = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto& mode = grid.mode(m);
    s += std::sqrt(mode.vol) * ff.value(mode.norm()) * mode_amplitudes[static_cast<Eigen::Index>(m)];
  }
  return g * s;
}

double decay_element(const FockBasis& basis, const Vector& state, const FormFactor& ff, double g) {
  if (state.size() != static_cast<Eigen::Index>(basis.size())) {
    throw InvalidArgument("decay element: state dimension does not match the basis");
  }
  Vector eta = Vector::Zero(static_cast<Eigen::Index>(basis.grid().size()));
  for (std::size_t m = 0; m < basis.grid().size(); ++m) {
    if (const auto idx = basis.one_boson_index(m)) {
      eta[static_cast<Eigen::Index>(m)] = state[static_cast<Eigen::Index>(*idx)];
    }
  }
  return decay_element(basis.grid(), eta, ff, g);
}

}  // namespace fiber
