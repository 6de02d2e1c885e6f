#include "cerenkov_fiber/common.hpp"

namespace fiber {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::config: return "invalid_config";
    case ErrorKind::budget: return "budget_exceeded";
    case ErrorKind::lookup: return "lookup_failure";
    case ErrorKind::solver: return "solver_failure";
    case ErrorKind::resonant: return "resonant_denominator";
    case ErrorKind::empty_window: return "empty_window";
    case ErrorKind::io: return "io_error";
  }
  return "unknown";
}

double smootherstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
}

double smootherstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

}  // namespace fiber
