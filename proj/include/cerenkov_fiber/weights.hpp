#pragma once

#include "cerenkov_fiber/common.hpp"

#include <cstddef>

namespace fiber {

/// Smooth indicator chi_n of the momentum shell [1/(n+1), 1/n].
///
/// Zero for r <= 1/(2(n+1)) and r >= 3/(2n), one on the plateau, quintic
/// smootherstep ramps in between. The steepest ramp is the inner one, of width
/// 1/(2(n+1)), so |chi_n'| <= 1.875 * 2(n+1) <= kShellRampConstant * n.
struct ShellSpec {
  std::size_t n = 1;

  double inner_support() const { return 1.0 / (2.0 * (n + 1.0)); }
  double plateau_begin() const { return 1.0 / (n + 1.0); }
  double plateau_end() const { return 1.0 / static_cast<double>(n); }
  double outer_support() const { return 1.5 / static_cast<double>(n); }
};

inline constexpr double kShellRampConstant = 4.0 * kSmootherstepMaxSlope;

double shell_weight(const ShellSpec& spec, double r);
double shell_weight_derivative(const ShellSpec& spec, double r);

/// Smooth indicator of [1/kappa, kappa], zero below 1/(2 kappa) and above 2 kappa.
/// kappa = inf gives the constant 1.
double window_weight(double kappa, double r);
double window_weight_derivative(double kappa, double r);

enum class ConeKind {
  /// Around +axis: one on cos >= plateau_cos, zero on cos <= support_cos.
  forward,
  /// Same as forward applied to |cos|.
  double_cone,
  /// Equatorial band: one on |cos| <= plateau_cos, zero on |cos| >= support_cos.
  complement_double,
};

/// Angular weight xi as a function of the cosine between k-hat and the axis.
/// The ramp is a smootherstep in the polar angle, so
/// |d xi / d theta| <= 1.875 / (angular width of the ramp).
struct ConeSpec {
  Vec3 axis = Vec3::UnitZ();
  ConeKind kind = ConeKind::forward;
  double plateau_cos = 0.9;
  double support_cos = 0.8;

  /// Checks the cosine ordering required by `kind`.
  void validate() const;
  /// Angular width of the ramp in radians.
  double ramp_width() const;
};

inline constexpr double kConeRampConstant = kSmootherstepMaxSlope;

double cone_weight(const ConeSpec& spec, const Vec3& k_hat);
/// d xi / d cos(theta) where cos(theta) = k_hat . axis.
double cone_weight_dcos(const ConeSpec& spec, double cos_theta);
/// Weight as a function of cos(theta) alone.
double cone_weight_cos(const ConeSpec& spec, double cos_theta);

/// Cone geometry tied to the coupling:
///   particle cone around u:  support cos(|g|^gamma), plateau cos(|g|^gamma / 2);
///   double-cone complement:  support cos(a |g|^(gamma/8)), plateau cos(2 a |g|^(gamma/8)).
ConeSpec coupling_cone(const Vec3& axis, double g, double gamma);
ConeSpec coupling_double_cone_complement(const Vec3& axis, double g, double gamma, double a);

}  // namespace fiber
