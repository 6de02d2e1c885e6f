#pragma once

#include "cerenkov_fiber/eigensolver.hpp"
#include "cerenkov_fiber/hamiltonian.hpp"

#include <optional>
#include <vector>

namespace fiber {

struct OverlapOptions {
  /// Half-width of the window around P^2/2; automatic when unset.
  std::optional<double> half_width;
  /// Lanczos steps from the vacuum (capped by the dimension).
  std::size_t max_steps = 2000;
  /// Minimum number of Ritz pairs computed.
  std::size_t min_pairs = 20;
  /// Ritz pairs with residual below this count as converged eigenpairs.
  double converged_tolerance = 1e-8;
  /// Captured weight below this sets the warning flag.
  double capture_threshold = 0.99;
};

struct OverlapEntry {
  double energy = 0.0;
  double weight = 0.0;  // |<Psi_j, Omega>|^2
  double residual = 0.0;
  bool converged = false;
  std::size_t ritz_index = 0;
};

/// Discrete spectral measure of the vacuum restricted to a window around P^2/2.
struct OverlapDistribution {
  double center = 0.0;
  double half_width = 0.0;
  double gamma_estimate = 0.0;
  std::vector<OverlapEntry> entries;
  double window_weight = 0.0;    // sum of weights in the window
  double captured_weight = 0.0;  // converged share of window_weight
  double mean = 0.0;             // first moment (normalized in the window)
  double variance = 0.0;         // second central moment
  double spread = 0.0;           // sqrt(variance)
  double max_weight = 0.0;
  bool exhausted = false;
  bool warning = false;
  KrylovSpectralMeasure measure;

  Vector eigenvector(const OverlapEntry& entry) const { return measure.ritz_vector(entry.ritz_index); }
};

/// Automatic half-width: 10 times the golden-rule rate, or 10 g^2 sum_m vol_m rho_m^2
/// below the Cerenkov threshold where the rate vanishes.
double automatic_half_width(const FiberModel& model, const Vec3& P, double g);

OverlapDistribution vacuum_overlap_distribution(const FiberModel& model, const Vec3& P, double g,
                                                const OverlapOptions& options = {});

/// sum_j w_j <Psi_j, dGamma(weight) Psi_j> over the window entries.
double window_weighted_number(const FiberModel& model, const OverlapDistribution& dist,
                              const Vector& weight);

}  // namespace fiber
