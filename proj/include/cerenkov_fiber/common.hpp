#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiber {

using Vec3 = Eigen::Vector3d;
using Vector = Eigen::VectorXd;

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  invalid_argument,
  config,
  budget,
  lookup,
  solver,
  resonant,
  empty_window,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// A requested grid or basis exceeds its configured budget.
struct BudgetError : Error {
  BudgetError(const std::string& what, std::size_t required)
      : Error(ErrorKind::budget, what), required(required) {}
  std::size_t required;
};

struct LookupError : Error {
  explicit LookupError(const std::string& what) : Error(ErrorKind::lookup, what) {}
};

/// Eigensolver ran out of iterations. Carries the best residual norms reached.
struct SolverError : Error {
  SolverError(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::solver, what), best_residuals(std::move(residuals)) {}
  std::vector<double> best_residuals;
};

struct ResonanceError : Error {
  ResonanceError(const std::string& what, std::size_t mode)
      : Error(ErrorKind::resonant, what), mode(mode) {}
  std::size_t mode;
};

struct EmptyWindowError : Error {
  explicit EmptyWindowError(const std::string& what) : Error(ErrorKind::empty_window, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

const char* to_string(ErrorKind kind);

/// Quintic smootherstep on [0,1], clamped outside. C2 at both ends.
double smootherstep(double t);
/// d/dt of smootherstep, zero outside (0,1).
double smootherstep_derivative(double t);

/// Largest value of smootherstep_derivative, attained at t = 1/2.
inline constexpr double kSmootherstepMaxSlope = 1.875;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace fiber
