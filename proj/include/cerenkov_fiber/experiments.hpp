#pragma once

#include "cerenkov_fiber/config.hpp"
#include "cerenkov_fiber/virial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fiber {

/// Serialized output of one command. `csv` is empty for JSON-only commands.
struct Report {
  std::string json;
  std::string csv;
  std::size_t failed_points = 0;
  std::vector<std::string> warnings;
};

/// First CSV line: "# fingerprint=<hex> command=<command>".
std::string csv_preamble(const std::string& fingerprint, const std::string& command);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

Report run_spectrum(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                    std::size_t pairs);

struct ScanRequest {
  double p_min = 0.1;
  double p_max = 1.0;
  std::size_t steps = 10;
  double g = 0.0;
  std::size_t threads = 1;
};
Report run_scan(const RunConfig& config, const FiberModel& model, const ScanRequest& request);

struct VirialRequest {
  double kappa = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> shell;
  std::optional<ConeSpec> cone;
  DilationMode mode = DilationMode::parallel;
};
Report run_virial(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                  const VirialRequest& request);

/// Roots at cos theta = -1 + 2i/(thetas - 1); a single angle means cos theta = 1.
Report run_cerenkov(const Vec3& P, std::optional<double> energy, std::size_t thetas);

Report run_golden_rule(const RunConfig& config, const Vec3& P, double g);

struct TrialScalingRequest {
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  std::size_t points = 9;
  double g = 1.0;
  std::optional<double> energy;
};
/// Uses the configured grid only; epsilon is spaced logarithmically.
Report run_trial_scaling(const RunConfig& config, const Vec3& P, const TrialScalingRequest& request);

Report run_overlap(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                   std::optional<double> half_width);

/// Grid nodes as CSV.
Report run_grid(const RunConfig& config);
/// Triplets of H_P.
Report run_operator(const RunConfig& config, const FiberModel& model, const Vec3& P, double g);
/// Shell weights chi_1..chi_n on a radial sample and a cone weight on a cosine sample.
Report run_weights(const RunConfig& config, const ConeSpec& cone, std::size_t samples);

}  // namespace fiber
