#pragma once

namespace fiber {

/// Radial coupling profile rho(r) = c r^beta, rolled off to zero at the
/// ultraviolet cutoff by a smootherstep over the last fraction `smooth_width`
/// of [0, cutoff].
///
///   rho(r) = c r^beta                      r <= cutoff (1 - w)
///   rho(r) = c r^beta S((cutoff - r)/(w cutoff))   inside the roll-off
///   rho(r) = 0                             r >= cutoff
///
/// S is the quintic smootherstep, so rho is C2 across both seams.
struct FormFactor {
  double amplitude = 1.0;
  double beta = 1.0;
  double cutoff = 1.0;
  double smooth_width = 0.2;

  /// Throws InvalidArgument unless c > 0, cutoff > 0 and 0 < w < 1.
  void validate() const;

  double operator()(double r) const { return value(r); }
  double value(double r) const;
  double derivative(double r) const;

  /// Start of the roll-off region, cutoff (1 - w).
  double plateau_end() const { return cutoff * (1.0 - smooth_width); }
};

double eval_form_factor(const FormFactor& ff, double r);
double eval_form_factor_derivative(const FormFactor& ff, double r);

}  // namespace fiber
