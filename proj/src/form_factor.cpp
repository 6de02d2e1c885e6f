#include "cerenkov_fiber/form_factor.hpp"

#include "cerenkov_fiber/common.hpp"

#include <cmath>

namespace fiber {

void FormFactor::validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("form factor: amplitude must be positive");
  }
  if (!std::isfinite(beta)) throw InvalidArgument("form factor: beta must be finite");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw InvalidArgument("form factor: cutoff must be positive");
  }
  if (!(smooth_width > 0.0 && smooth_width < 1.0)) {
    throw InvalidArgument("form factor: smooth_width must lie in (0,1)");
  }
}

double FormFactor::value(double r) const {
  if (r >= cutoff || r < 0.0) return 0.0;
  if (r == 0.0) return beta > 0.0 ? 0.0 : (beta == 0.0 ? amplitude : INFINITY);
  const double power = amplitude * std::pow(r, beta);
  if (r <= plateau_end()) return power;
  return power * smootherstep((cutoff - r) / (smooth_width * cutoff));
}

double FormFactor::derivative(double r) const {
  if (r >= cutoff || r < 0.0) return 0.0;
  if (r == 0.0) {
    if (beta == 1.0) return amplitude;
    return beta > 1.0 ? 0.0 : INFINITY;
  }
  const double power = amplitude * std::pow(r, beta);
  const double dpower = beta * power / r;
  if (r <= plateau_end()) return dpower;
  const double width = smooth_width * cutoff;
  const double t = (cutoff - r) / width;
  return dpower * smootherstep(t) - power * smootherstep_derivative(t) / width;
}

double eval_form_factor(const FormFactor& ff, double r) { return ff.value(r); }

double eval_form_factor_derivative(const FormFactor& ff, double r) { return ff.derivative(r); }

}  // namespace fiber
