#pragma once

#include "cerenkov_fiber/eigensolver.hpp"
#include "cerenkov_fiber/expectation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fiber {

inline constexpr double kDefaultGradientStep = 1e-3;
inline constexpr double kDefaultCurvatureStep = 1e-2;

/// Lowest eigenpairs of H_P and its degenerate ground cluster.
struct GroundState {
  SpectralResult spectrum;
  std::size_t cluster_size = 1;

  double energy() const { return spectrum.eigenvalues.front(); }
  Vector vector() const { return spectrum.vector(0); }
  std::vector<Vector> cluster() const;
  std::vector<double> cluster_residuals() const;
};

/// Eigenvalues within this distance of the lowest one form the ground cluster.
double cluster_tolerance(const SolverOptions& options, double energy);

GroundState solve_ground_state(const FiberModel& model, const Vec3& P, double g,
                               const SolverOptions& options = {}, std::size_t pairs = 1);

double ground_energy(const FiberModel& model, const Vec3& P, double g,
                     const SolverOptions& options = {});

/// Central differences of E0 along the direction of `axis`, at |P| = p.
double grad_E_fd(const FiberModel& model, double p, double g, double h = kDefaultGradientStep,
                 const SolverOptions& options = {}, const Vec3& axis = Vec3::UnitZ());
double curvature_fd(const FiberModel& model, double p, double g, double h = kDefaultCurvatureStep,
                    const SolverOptions& options = {}, const Vec3& axis = Vec3::UnitZ());

/// Free gaps at or below this value count as resonant.
inline constexpr double kResonanceThreshold = 1e-12;

/// E2 = -sum_m vol_m rho(|k_m|)^2 / ((P - k_m)^2/2 + |k_m| - P^2/2).
/// Throws ResonanceError naming the first mode whose gap is not positive.
double second_order_energy(const Vec3& P, const FormFactor& ff, const MomentumGrid& grid);

struct ScanSpec {
  double p_min = 0.1;
  double p_max = 1.0;
  std::size_t steps = 10;
  double g = 0.0;
  std::size_t n_shell_max = 3;
  double grad_step = kDefaultGradientStep;
  double curvature_step = kDefaultCurvatureStep;
  /// Eigenpairs solved at the central point; more pairs expose degeneracies.
  std::size_t pairs = 1;
  /// Direction of P; defaults to the grid axis.
  std::optional<Vec3> axis;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 1;

  void validate() const;
  std::vector<double> momenta() const;
};

struct ScanRow {
  double p = 0.0;
  bool ok = false;
  std::string error;
  double energy = 0.0;
  std::size_t cluster_size = 0;
  double residual = 0.0;
  double grad_fh = 0.0;
  bool fh_warning = false;
  double grad_fd = 0.0;
  double curvature = 0.0;
  std::vector<double> shell_numbers;  // n = 1..n_shell_max
  /// Weight of the vacuum in the ground eigenspace.
  double vacuum_overlap = 0.0;
};

struct MassShellScan {
  ScanSpec spec;
  std::vector<ScanRow> rows;
};

/// Scan |P| along the axis. Solver failures mark the row and the scan goes on.
MassShellScan mass_shell_scan(const FiberModel& model, const ScanSpec& spec,
                              const SolverOptions& options = {});

}  // namespace fiber
