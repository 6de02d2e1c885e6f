#include "cerenkov_fiber/overlap.hpp"

#include "cerenkov_fiber/cerenkov.hpp"

#include <algorithm>
#include <cmath>

namespace fiber {

double automatic_half_width(const FiberModel& model, const Vec3& P, double g) {
  const double gamma = golden_rule_rate(P.norm(), g, model.form_factor());
  if (gamma > 0.0) return 10.0 * gamma;
  return 10.0 * g * g * model.coupling().squaredNorm();
}

OverlapDistribution vacuum_overlap_distribution(const FiberModel& model, const Vec3& P, double g,
                                                const OverlapOptions& options) {
  if (options.half_width && !(*options.half_width >= 0.0)) {
    throw InvalidArgument("overlap: window half-width must be nonnegative");
  }
  const std::size_t dim = model.dimension();
  OverlapDistribution out;
  out.center = 0.5 * P.squaredNorm();
  out.gamma_estimate = golden_rule_rate(P.norm(), g, model.form_factor());
  out.half_width = options.half_width.value_or(automatic_half_width(model, P, g));

  Vector omega = Vector::Zero(static_cast<Eigen::Index>(dim));
  omega[0] = 1.0;
  const std::size_t steps = std::min(dim, std::max(options.max_steps, options.min_pairs));
  out.measure = krylov_spectral_measure(model.hamiltonian(P, g), omega, steps, true);
  out.exhausted = out.measure.exhausted;

  const double slack = 1e-12 * std::max(1.0, std::abs(out.center));
  double converged_weight = 0.0;
  for (std::size_t j = 0; j < out.measure.ritz_values.size(); ++j) {
    const double e = out.measure.ritz_values[j];
    if (std::abs(e - out.center) > out.half_width + slack) continue;
    OverlapEntry entry;
    entry.energy = e;
    entry.weight = out.measure.weights[j];
    entry.residual = out.measure.residuals[j];
    entry.converged = entry.residual <= options.converged_tolerance;
    entry.ritz_index = j;
    out.window_weight += entry.weight;
    if (entry.converged) converged_weight += entry.weight;
    out.max_weight = std::max(out.max_weight, entry.weight);
    out.entries.push_back(entry);
  }
  if (out.window_weight > 0.0) {
    out.captured_weight = converged_weight / out.window_weight;
    for (const auto& e : out.entries) out.mean += e.weight * e.energy;
    out.mean /= out.window_weight;
    for (const auto& e : out.entries) out.variance += e.weight * (e.energy - out.mean) * (e.energy - out.mean);
    out.variance /= out.window_weight;
    out.spread = std::sqrt(out.variance);
  }
  out.warning = out.captured_weight < options.capture_threshold;
  return out;
}

double window_weighted_number(const FiberModel& model, const OverlapDistribution& dist,
                              const Vector& weight) {
  if (dist.measure.basis.cols() == 0) throw InvalidArgument("overlap: Krylov basis was not kept");
  const Vector diag = number_weighted_diagonal(model.basis(), weight);
  double total = 0.0;
  for (const auto& e : dist.entries) {
    const Vector v = dist.eigenvector(e);
    total += e.weight * v.dot(diag.cwiseProduct(v)) / v.squaredNorm();
  }
  return total;
}

}  // namespace fiber
