#include "cerenkov_fiber/weights.hpp"

#include <algorithm>
#include <cmath>

namespace fiber {

namespace {

// Rising ramp from 0 at `lo` to 1 at `hi`, falling ramp from 1 at `hi2` to 0 at `lo2`.
double bump(double r, double lo, double hi, double hi2, double lo2) {
  if (r <= lo || r >= lo2) return 0.0;
  if (r < hi) return smootherstep((r - lo) / (hi - lo));
  if (r <= hi2) return 1.0;
  return smootherstep((lo2 - r) / (lo2 - hi2));
}

double bump_derivative(double r, double lo, double hi, double hi2, double lo2) {
  if (r <= lo || r >= lo2) return 0.0;
  if (r < hi) return smootherstep_derivative((r - lo) / (hi - lo)) / (hi - lo);
  if (r <= hi2) return 0.0;
  return -smootherstep_derivative((lo2 - r) / (lo2 - hi2)) / (lo2 - hi2);
}

double clamp_cos(double c) { return std::clamp(c, -1.0, 1.0); }

}  // namespace

double shell_weight(const ShellSpec& s, double r) {
  if (s.n == 0) throw InvalidArgument("shell: n must be positive");
  return bump(r, s.inner_support(), s.plateau_begin(), s.plateau_end(), s.outer_support());
}

double shell_weight_derivative(const ShellSpec& s, double r) {
  if (s.n == 0) throw InvalidArgument("shell: n must be positive");
  return bump_derivative(r, s.inner_support(), s.plateau_begin(), s.plateau_end(),
                         s.outer_support());
}

double window_weight(double kappa, double r) {
  if (std::isinf(kappa)) return 1.0;
  return bump(r, 0.5 / kappa, 1.0 / kappa, kappa, 2.0 * kappa);
}

double window_weight_derivative(double kappa, double r) {
  if (std::isinf(kappa)) return 0.0;
  return bump_derivative(r, 0.5 / kappa, 1.0 / kappa, kappa, 2.0 * kappa);
}

void ConeSpec::validate() const {
  if (!(axis.norm() > 0.0)) throw InvalidArgument("cone: axis must be nonzero");
  const bool in_range = plateau_cos >= -1.0 && plateau_cos <= 1.0 && support_cos >= -1.0 &&
                        support_cos <= 1.0;
  if (!in_range) throw InvalidArgument("cone: cosines must lie in [-1,1]");
  switch (kind) {
    case ConeKind::forward:
    case ConeKind::double_cone:
      if (!(support_cos < plateau_cos)) {
        throw InvalidArgument("cone: forward and double cones need support_cos < plateau_cos");
      }
      if (kind == ConeKind::double_cone && support_cos < 0.0) {
        throw InvalidArgument("cone: double cone cosines must be nonnegative");
      }
      break;
    case ConeKind::complement_double:
      if (!(plateau_cos < support_cos) || plateau_cos < 0.0) {
        throw InvalidArgument(
            "cone: double-cone complement needs 0 <= plateau_cos < support_cos");
      }
      break;
  }
}

double ConeSpec::ramp_width() const { return std::abs(std::acos(support_cos) - std::acos(plateau_cos)); }

double cone_weight_cos(const ConeSpec& spec, double c) {
  c = clamp_cos(c);
  const double theta_p = std::acos(spec.plateau_cos);
  const double theta_s = std::acos(spec.support_cos);
  switch (spec.kind) {
    case ConeKind::forward:
      if (c <= spec.support_cos) return 0.0;
      if (c >= spec.plateau_cos) return 1.0;
      return smootherstep((theta_s - std::acos(c)) / (theta_s - theta_p));
    case ConeKind::double_cone: {
      const double a = std::abs(c);
      if (a <= spec.support_cos) return 0.0;
      if (a >= spec.plateau_cos) return 1.0;
      return smootherstep((theta_s - std::acos(a)) / (theta_s - theta_p));
    }
    case ConeKind::complement_double: {
      const double a = std::abs(c);
      if (a >= spec.support_cos) return 0.0;
      if (a <= spec.plateau_cos) return 1.0;
      // theta_s < theta_p here; weight rises as the angle to the axis grows.
      return smootherstep((std::acos(a) - theta_s) / (theta_p - theta_s));
    }
  }
  return 0.0;
}

double cone_weight(const ConeSpec& spec, const Vec3& k_hat) {
  const double c = k_hat.dot(spec.axis.normalized()) / k_hat.norm();
  return cone_weight_cos(spec, c);
}

double cone_weight_dcos(const ConeSpec& spec, double c) {
  c = clamp_cos(c);
  const double theta_p = std::acos(spec.plateau_cos);
  const double theta_s = std::acos(spec.support_cos);
  const double sign = c < 0.0 ? -1.0 : 1.0;
  const double a = spec.kind == ConeKind::forward ? c : std::abs(c);
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - a * a));
  double t = 0.0;
  double dt_dtheta = 0.0;
  switch (spec.kind) {
    case ConeKind::forward:
    case ConeKind::double_cone:
      if (a <= spec.support_cos || a >= spec.plateau_cos) return 0.0;
      t = (theta_s - std::acos(a)) / (theta_s - theta_p);
      dt_dtheta = -1.0 / (theta_s - theta_p);
      break;
    case ConeKind::complement_double:
      if (a >= spec.support_cos || a <= spec.plateau_cos) return 0.0;
      t = (std::acos(a) - theta_s) / (theta_p - theta_s);
      dt_dtheta = 1.0 / (theta_p - theta_s);
      break;
  }
  if (sin_t == 0.0) return 0.0;
  // d theta / d a = -1 / sin(theta)
  const double d_da = smootherstep_derivative(t) * dt_dtheta * (-1.0 / sin_t);
  return spec.kind == ConeKind::forward ? d_da : sign * d_da;
}

ConeSpec coupling_cone(const Vec3& axis, double g, double gamma) {
  const double angle = std::pow(std::abs(g), gamma);
  ConeSpec s;
  s.axis = axis.normalized();
  s.kind = ConeKind::forward;
  s.support_cos = std::cos(angle);
  s.plateau_cos = std::cos(0.5 * angle);
  return s;
}

ConeSpec coupling_double_cone_complement(const Vec3& axis, double g, double gamma, double a) {
  const double angle = a * std::pow(std::abs(g), gamma / 8.0);
  ConeSpec s;
  s.axis = axis.normalized();
  s.kind = ConeKind::complement_double;
  s.support_cos = std::cos(angle);
  s.plateau_cos = std::cos(2.0 * angle);
  return s;
}

}  // namespace fiber
