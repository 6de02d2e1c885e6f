#include "cerenkov_fiber/mass_shell.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace fiber {

std::vector<Vector> GroundState::cluster() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < cluster_size; ++i) out.push_back(spectrum.vector(i));
  return out;
}

std::vector<double> GroundState::cluster_residuals() const {
  return {spectrum.residuals.begin(),
          spectrum.residuals.begin() + static_cast<std::ptrdiff_t>(cluster_size)};
}

double cluster_tolerance(const SolverOptions& options, double energy) {
  return std::max(10.0 * options.tolerance, 1e-10 * std::max(1.0, std::abs(energy)));
}

GroundState solve_ground_state(const FiberModel& model, const Vec3& P, double g,
                               const SolverOptions& options, std::size_t pairs) {
  const std::size_t dim = model.dimension();
  const std::size_t count = std::clamp<std::size_t>(pairs, 1, dim);
  GroundState gs;
  gs.spectrum = lowest_eigenpairs(model.hamiltonian(P, g), count, options);
  gs.cluster_size = gs.spectrum.ground_cluster_size(cluster_tolerance(options, gs.energy()));
  return gs;
}

double ground_energy(const FiberModel& model, const Vec3& P, double g, const SolverOptions& options) {
  return solve_ground_state(model, P, g, options, 1).energy();
}

namespace {

Vec3 unit_axis(const Vec3& axis) {
  if (!(axis.norm() > 0.0)) throw InvalidArgument("mass shell: axis must be nonzero");
  return axis.normalized();
}

}  // namespace

double grad_E_fd(const FiberModel& model, double p, double g, double h, const SolverOptions& options,
                 const Vec3& axis) {
  if (!(h > 0.0) || !(p - h > 0.0)) throw InvalidArgument("grad_E_fd: need 0 < h < |P|");
  const Vec3 u = unit_axis(axis);
  const double ep = ground_energy(model, (p + h) * u, g, options);
  const double em = ground_energy(model, (p - h) * u, g, options);
  return (ep - em) / (2.0 * h);
}

double curvature_fd(const FiberModel& model, double p, double g, double h,
                    const SolverOptions& options, const Vec3& axis) {
  if (!(h > 0.0) || !(p - h > 0.0)) throw InvalidArgument("curvature_fd: need 0 < h < |P|");
  const Vec3 u = unit_axis(axis);
  const double ep = ground_energy(model, (p + h) * u, g, options);
  const double e0 = ground_energy(model, p * u, g, options);
  const double em = ground_energy(model, (p - h) * u, g, options);
  return (ep - 2.0 * e0 + em) / (h * h);
}

double second_order_energy(const Vec3& P, const FormFactor& ff, const MomentumGrid& grid) {
  ff.validate();
  const double bare = 0.5 * P.squaredNorm();
  double sum = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto& mode = grid.mode(m);
    const double rho = ff.value(mode.norm());
    const double gap = 0.5 * (P - mode.k).squaredNorm() + mode.norm() - bare;
    if (gap <= kResonanceThreshold) {
      std::ostringstream msg;
      msg << "second-order energy: resonant denominator " << gap << " at mode " << m << " (k = "
          << mode.k.x() << ", " << mode.k.y() << ", " << mode.k.z() << ")";
      throw ResonanceError(msg.str(), m);
    }
    sum += mode.vol * rho * rho / gap;
  }
  return -sum;
}

void ScanSpec::validate() const {
  if (steps == 0) throw InvalidArgument("scan: steps must be at least 1");
  if (!(p_min > 0.0) || !std::isfinite(p_max)) throw InvalidArgument("scan: need 0 < pmin");
  if (steps > 1 && !(p_max > p_min)) throw InvalidArgument("scan: need pmax > pmin");
  if (!(grad_step > 0.0) || !(curvature_step > 0.0)) {
    throw InvalidArgument("scan: finite-difference steps must be positive");
  }
  if (!(p_min - std::max(grad_step, curvature_step) > 0.0)) {
    throw InvalidArgument("scan: pmin must exceed the finite-difference steps");
  }
  if (!std::isfinite(g)) throw InvalidArgument("scan: g must be finite");
  if (axis && !(axis->norm() > 0.0)) throw InvalidArgument("scan: axis must be nonzero");
}

std::vector<double> ScanSpec::momenta() const {
  std::vector<double> p(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    p[i] = steps == 1 ? p_min
                      : p_min + (p_max - p_min) * static_cast<double>(i) /
                                    static_cast<double>(steps - 1);
  }
  return p;
}

namespace {

ScanRow scan_point(const FiberModel& model, const ScanSpec& spec, const SolverOptions& options,
                   const Vec3& u, double p) {
  ScanRow row;
  row.p = p;
  try {
    const Vec3 P = p * u;
    const GroundState gs = solve_ground_state(model, P, spec.g, options, spec.pairs);
    const auto cluster = gs.cluster();
    row.energy = gs.energy();
    row.cluster_size = gs.cluster_size;
    row.residual = *std::max_element(gs.spectrum.residuals.begin(),
                                     gs.spectrum.residuals.begin() +
                                         static_cast<std::ptrdiff_t>(gs.cluster_size));
    const auto fh =
        feynman_hellmann_grad(model, cluster, P, gs.cluster_residuals(), options.tolerance);
    row.grad_fh = fh.gradient.dot(u);
    row.fh_warning = fh.residual_warning;
    row.grad_fd = grad_E_fd(model, p, spec.g, spec.grad_step, options, u);
    row.curvature = curvature_fd(model, p, spec.g, spec.curvature_step, options, u);
    for (std::size_t n = 1; n <= spec.n_shell_max; ++n) {
      const Vector w = restricted_number_weight(model.grid(), ShellSpec{n});
      double sum = 0.0;
      for (const auto& v : cluster) sum += expect_number(model.basis(), v, w).value;
      row.shell_numbers.push_back(sum / static_cast<double>(cluster.size()));
    }
    double overlap = 0.0;
    for (const auto& v : cluster) overlap += v[0] * v[0];
    row.vacuum_overlap = overlap;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

MassShellScan mass_shell_scan(const FiberModel& model, const ScanSpec& spec,
                              const SolverOptions& options) {
  spec.validate();
  const Vec3 u = unit_axis(spec.axis.value_or(model.grid().axis()));
  const auto momenta = spec.momenta();
  MassShellScan scan;
  scan.spec = spec;
  scan.rows.resize(momenta.size());

  std::size_t threads = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  threads = std::clamp<std::size_t>(threads, 1, momenta.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < momenta.size(); i = next++) {
      scan.rows[i] = scan_point(model, spec, options, u, momenta[i]);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return scan;
}

}  // namespace fiber
