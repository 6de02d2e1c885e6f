#pragma once

#include "cerenkov_fiber/basis.hpp"
#include "cerenkov_fiber/form_factor.hpp"

#include <optional>
#include <vector>

namespace fiber {

/// Nonnegative roots r = |k| of r^2/2 + (1 - |P| cos) r + (P^2/2 - E) = 0,
/// ascending; a double root is returned once.
std::vector<double> resonance_momentum(double P, double E, double cos_theta);

/// 1/|P| when |P| > 1.
std::optional<double> cerenkov_threshold(double P);

/// Golden-rule decay rate of the bare state,
///   2 pi g^2 int d^3k rho(|k|)^2 delta((P-k)^2/2 + |k| - P^2/2)
/// = (4 pi^2 g^2 / |P|) int_0^{2(|P|-1)} u rho(u)^2 du.
double golden_rule_rate(double P, double g, const FormFactor& ff);

/// Compact bump h(z) = S(1 - |z|) on [-1, 1], h(0) = 1.
double trial_bump(double z);

struct TrialSpec {
  double epsilon = 1e-2;
  /// Target energy; P^2/2 when unset.
  std::optional<double> energy;
};

/// Per-mode trial amplitudes
///   eta_m = sqrt(vol_m) eps^{-1/2} h(((P - k_m)^2/2 + |k_m| - E) / eps).
/// Throws EmptyWindowError when every amplitude vanishes.
Vector trial_amplitudes(const MomentumGrid& grid, const Vec3& P, const TrialSpec& spec);

struct TrialState {
  Vector state;  // on the basis, one-boson sector only, unnormalized
  double norm = 0.0;
};

/// Trial vector on a basis that contains the one-boson sector.
TrialState trial_state(const FockBasis& basis, const Vec3& P, const TrialSpec& spec);

/// g sum_m sqrt(vol_m) rho(|k_m|) eta_m from per-mode amplitudes.
double decay_element(const MomentumGrid& grid, const Vector& mode_amplitudes, const FormFactor& ff,
                     double g);
/// Same element read from the one-boson amplitudes of a basis vector.
double decay_element(const FockBasis& basis, const Vector& state, const FormFactor& ff, double g);

}  // namespace fiber
