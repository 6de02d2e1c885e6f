#pragma once

#include "cerenkov_fiber/basis.hpp"
#include "cerenkov_fiber/eigensolver.hpp"
#include "cerenkov_fiber/form_factor.hpp"
#include "cerenkov_fiber/grid.hpp"
#include "cerenkov_fiber/hamiltonian.hpp"
#include "cerenkov_fiber/overlap.hpp"

#include <memory>
#include <optional>
#include <string>

namespace fiber {

/// Everything a run needs besides the per-command parameters.
///
/// JSON layout (all keys optional, unknown keys rejected):
///   grid:        k_min, k_max, radial_count, spacing, polar_count,
///                azimuthal_count, cell_volume, mode_budget
///   basis:       n_max, e_cut, max_dimension
///   form_factor: amplitude, beta, cutoff, smooth_width
///   solver:      tolerance, max_iterations, krylov_dim, method, dense_threshold, seed, pairs
///   scan:        n_shell_max, grad_step, curvature_step, threads
///   overlap:     max_steps, min_pairs, converged_tolerance, capture_threshold
/// k_min and k_max default to 0.05 and 1 times the form-factor cutoff.
struct RunConfig {
  RadialSpec radial;
  AngularSpec angular;
  std::size_t mode_budget = kDefaultModeBudget;

  std::size_t n_max = 2;
  std::optional<double> e_cut;
  std::size_t max_dimension = kDefaultBasisBudget;

  FormFactor form_factor;

  SolverOptions solver;
  std::size_t pairs = 1;

  std::size_t n_shell_max = 3;
  double grad_step = 1e-3;
  double curvature_step = 1e-2;
  std::size_t threads = 0;

  OverlapOptions overlap;

  /// Throws ConfigError when any field violates its module's preconditions.
  void validate() const;
  /// Sorted-key JSON of every field, defaults filled in.
  std::string canonical_json() const;
  /// FNV-1a hash of canonical_json().
  std::string fingerprint() const;
};

RunConfig default_config();
/// Parse and validate a JSON document. Throws ConfigError.
RunConfig parse_config(const std::string& text);
/// Throws IoError when the file cannot be read, ConfigError when it is invalid.
RunConfig load_config(const std::string& path);

MomentumGrid build_config_grid(const RunConfig& config);
std::shared_ptr<const FiberModel> build_model(const RunConfig& config);

}  // namespace fiber
