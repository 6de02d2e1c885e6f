#include "cerenkov_fiber/experiments.hpp"

#include "cerenkov_fiber/cerenkov.hpp"
#include "cerenkov_fiber/mass_shell.hpp"
#include "cerenkov_fiber/numeric_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fiber {

namespace {

using nlohmann::json;

std::string fmt(double x) { return format_double(x); }

std::string fmt_vec(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// JSON has no infinities or NaN; such values are written as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json header(const RunConfig& config, const std::string& command) {
  return {{"fingerprint", config.fingerprint()}, {"command", command}};
}

std::string csv_number_or_empty(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

json cone_json(const ConeSpec& cone) {
  const char* kind = cone.kind == ConeKind::forward       ? "forward"
                     : cone.kind == ConeKind::double_cone ? "double"
                                                          : "complement";
  return {{"axis", vec_json(cone.axis)},
          {"kind", kind},
          {"plateau_cos", cone.plateau_cos},
          {"support_cos", cone.support_cos}};
}

}  // namespace

std::string csv_preamble(const std::string& fingerprint, const std::string& command) {
  return "# fingerprint=" + fingerprint + " command=" + command + "\n";
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit: need two or more points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("fit: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw InvalidArgument("fit: abscissae must not all coincide");
  return (n * sxy - sx * sy) / denom;
}

Report run_spectrum(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                    std::size_t pairs) {
  const std::string command = "spectrum p=" + fmt_vec(P) + " g=" + fmt(g) + " pairs=" + std::to_string(pairs);
  const GroundState gs = solve_ground_state(model, P, g, config.solver, pairs);
  const auto cluster = gs.cluster();
  const auto fh = feynman_hellmann_grad(model, cluster, P, gs.cluster_residuals(), config.solver.tolerance);

  json shells = json::array();
  for (std::size_t n = 1; n <= config.n_shell_max; ++n) {
    const Vector w = restricted_number_weight(model.grid(), ShellSpec{n});
    double sum = 0.0;
    for (const auto& v : cluster) sum += expect_number(model.basis(), v, w).value;
    shells.push_back(sum / static_cast<double>(cluster.size()));
  }
  double overlap = 0.0;
  for (const auto& v : cluster) overlap += v[0] * v[0];

  json doc = header(config, command);
  doc["P"] = vec_json(P);
  doc["g"] = g;
  doc["dimension"] = model.dimension();
  doc["modes"] = model.grid().size();
  doc["method"] = gs.spectrum.method;
  doc["matvecs"] = gs.spectrum.matvecs;
  doc["restarts"] = gs.spectrum.restarts;
  doc["eigenvalues"] = gs.spectrum.eigenvalues;
  doc["residuals"] = gs.spectrum.residuals;
  doc["cluster_size"] = gs.cluster_size;
  doc["feynman_hellmann"] = vec_json(fh.gradient);
  doc["fh_warning"] = fh.residual_warning;
  doc["vacuum_overlap"] = overlap;
  doc["shell_numbers"] = shells;
  doc["variational_gap"] = gs.energy() - 0.5 * P.squaredNorm();

  Report r;
  r.json = doc.dump(2) + "\n";
  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), command) << "index,energy,residual,vacuum_weight\n";
  for (std::size_t i = 0; i < gs.spectrum.size(); ++i) {
    const double v0 = gs.spectrum.eigenvectors(0, static_cast<Eigen::Index>(i));
    csv << i << ',' << fmt(gs.spectrum.eigenvalues[i]) << ',' << fmt(gs.spectrum.residuals[i]) << ','
        << fmt(v0 * v0) << '\n';
  }
  r.csv = csv.str();
  if (fh.residual_warning) r.warnings.push_back("ground-state residual above tolerance");
  return r;
}

Report run_scan(const RunConfig& config, const FiberModel& model, const ScanRequest& request) {
  const std::string command = "scan pmin=" + fmt(request.p_min) + " pmax=" + fmt(request.p_max) +
                              " steps=" + std::to_string(request.steps) + " g=" + fmt(request.g);
  ScanSpec spec;
  spec.p_min = request.p_min;
  spec.p_max = request.p_max;
  spec.steps = request.steps;
  spec.g = request.g;
  spec.n_shell_max = config.n_shell_max;
  spec.grad_step = config.grad_step;
  spec.curvature_step = config.curvature_step;
  spec.pairs = config.pairs;
  spec.threads = request.threads;
  const MassShellScan scan = mass_shell_scan(model, spec, config.solver);

  Report r;
  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), command)
      << "p,energy,grad_fh,grad_fd,curvature,vacuum_overlap,cluster_size,residual,fh_warning,status";
  for (std::size_t n = 1; n <= spec.n_shell_max; ++n) csv << ",N_" << n;
  csv << '\n';
  json rows = json::array();
  for (const auto& row : scan.rows) {
    const double nan = std::nan("");
    csv << fmt(row.p);
    if (row.ok) {
      csv << ',' << fmt(row.energy) << ',' << fmt(row.grad_fh) << ',' << fmt(row.grad_fd) << ','
          << fmt(row.curvature) << ',' << fmt(row.vacuum_overlap) << ',' << row.cluster_size << ','
          << fmt(row.residual) << ',' << (row.fh_warning ? 1 : 0) << ",ok";
      for (double x : row.shell_numbers) csv << ',' << fmt(x);
    } else {
      ++r.failed_points;
      csv << ",nan,nan,nan,nan,nan,0,nan,0,failed";
      for (std::size_t n = 1; n <= spec.n_shell_max; ++n) csv << ',' << fmt(nan);
    }
    csv << '\n';
    json jr = {{"p", row.p}, {"status", row.ok ? "ok" : "failed"}};
    if (row.ok) {
      jr["energy"] = row.energy;
      jr["grad_fh"] = row.grad_fh;
      jr["grad_fd"] = row.grad_fd;
      jr["curvature"] = row.curvature;
      jr["vacuum_overlap"] = row.vacuum_overlap;
      jr["cluster_size"] = row.cluster_size;
      jr["residual"] = row.residual;
      jr["fh_warning"] = row.fh_warning;
      jr["shell_numbers"] = row.shell_numbers;
    } else {
      jr["error"] = row.error;
      r.warnings.push_back("scan point " + fmt(row.p) + " failed: " + row.error);
    }
    rows.push_back(jr);
  }
  json doc = header(config, command);
  doc["g"] = request.g;
  doc["dimension"] = model.dimension();
  doc["rows"] = rows;
  doc["failed_points"] = r.failed_points;
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  return r;
}

Report run_virial(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                  const VirialRequest& request) {
  std::string command = "virial p=" + fmt_vec(P) + " g=" + fmt(g) + " kappa=" + fmt(request.kappa);
  if (request.shell) command += " sector=" + std::to_string(*request.shell);
  if (request.mode == DilationMode::perpendicular) command += " perp";

  DilationSpec spec;
  spec.kappa = request.kappa;
  spec.shell = request.shell;
  spec.cone = request.cone;
  spec.mode = request.mode;
  spec.perp_axis = P.norm() > 0.0 ? Vec3(P.normalized()) : model.grid().axis();
  spec.validate(model.form_factor());

  const GroundState gs = solve_ground_state(model, P, g, config.solver, config.pairs);
  const Vector psi = gs.vector();
  const auto fh = feynman_hellmann_grad(model, gs.cluster(), P, gs.cluster_residuals(),
                                        config.solver.tolerance);
  VirialResidual res;
  if (request.shell) {
    res = sector_virial_residual(model, psi, fh.gradient, g, spec);
  } else {
    res = virial_residual(model, psi, P, g, spec);
  }

  json doc = header(config, command);
  doc["P"] = vec_json(P);
  doc["g"] = g;
  doc["kappa"] = number(request.kappa);
  doc["shell"] = request.shell ? json(*request.shell) : json(nullptr);
  doc["cone"] = request.cone ? cone_json(*request.cone) : json(nullptr);
  doc["mode"] = request.mode == DilationMode::parallel ? "parallel" : "perpendicular";
  doc["energy"] = gs.energy();
  doc["eigen_residual"] = gs.spectrum.residuals.front();
  doc["cluster_size"] = gs.cluster_size;
  doc["grad_E"] = vec_json(fh.gradient);
  doc["residual"] = res.residual;
  doc["terms"] = {{"field_energy", res.field_energy_term},
                  {"mixed", res.mixed_term},
                  {"momentum", res.momentum_term},
                  {"coupling", res.coupling_term}};
  if (!request.shell) doc["energy_identity_residual"] = energy_identity_residual(model, psi, P, g);

  Report r;
  r.json = doc.dump(2) + "\n";
  if (gs.cluster_size > 1) r.warnings.push_back("degenerate ground cluster; residual uses its first member");
  return r;
}

Report run_cerenkov(const Vec3& P, std::optional<double> energy, std::size_t thetas) {
  if (thetas == 0) throw InvalidArgument("cerenkov: need at least one angle");
  const double p = P.norm();
  const double E = energy.value_or(0.5 * p * p);
  const std::string command = "cerenkov p=" + fmt_vec(P) + " e=" + fmt(E) + " thetas=" + std::to_string(thetas);
  const auto threshold = p > 0.0 ? cerenkov_threshold(p) : std::nullopt;

  std::ostringstream csv;
  csv << csv_preamble(fnv1a_hex(command), command) << "cos_theta,root_count,root_1,root_2\n";
  json rows = json::array();
  for (std::size_t i = 0; i < thetas; ++i) {
    const double c = thetas == 1 ? 1.0
                                 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(thetas - 1);
    const auto roots = resonance_momentum(p, E, c);
    csv << fmt(c) << ',' << roots.size() << ','
        << csv_number_or_empty(roots.size() > 0 ? std::optional<double>(roots[0]) : std::nullopt) << ','
        << csv_number_or_empty(roots.size() > 1 ? std::optional<double>(roots[1]) : std::nullopt) << '\n';
    rows.push_back({{"cos_theta", c}, {"roots", roots}});
  }
  json doc = {{"fingerprint", fnv1a_hex(command)}, {"command", command}};
  doc["P"] = vec_json(P);
  doc["E"] = E;
  doc["threshold_cos"] = threshold ? json(*threshold) : json(nullptr);
  doc["rows"] = rows;
  Report r;
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  return r;
}

Report run_golden_rule(const RunConfig& config, const Vec3& P, double g) {
  const std::string command = "golden-rule p=" + fmt_vec(P) + " g=" + fmt(g);
  const double p = P.norm();
  json doc = header(config, command);
  doc["P"] = vec_json(P);
  doc["g"] = g;
  doc["gamma"] = golden_rule_rate(p, g, config.form_factor);
  const auto threshold = p > 0.0 ? cerenkov_threshold(p) : std::nullopt;
  doc["threshold_cos"] = threshold ? json(*threshold) : json(nullptr);
  Report r;
  r.json = doc.dump(2) + "\n";
  return r;
}

Report run_trial_scaling(const RunConfig& config, const Vec3& P, const TrialScalingRequest& request) {
  if (!(request.eps_min > 0.0) || !(request.eps_max >= request.eps_min) || request.points == 0) {
    throw InvalidArgument("trial-scaling: need 0 < eps-min <= eps-max and at least one point");
  }
  const double E = request.energy.value_or(0.5 * P.squaredNorm());
  const std::string command = "trial-scaling p=" + fmt_vec(P) + " e=" + fmt(E) + " g=" + fmt(request.g) +
                              " eps-min=" + fmt(request.eps_min) + " eps-max=" + fmt(request.eps_max) +
                              " points=" + std::to_string(request.points);
  const MomentumGrid grid = build_config_grid(config);

  Report r;
  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), command) << "epsilon,element,eta_norm,ratio\n";
  std::vector<double> eps_ok;
  std::vector<double> ratio_ok;
  json rows = json::array();
  for (std::size_t i = 0; i < request.points; ++i) {
    const double t = request.points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(request.points - 1);
    const double eps = request.eps_min * std::pow(request.eps_max / request.eps_min, t);
    try {
      const Vector eta = trial_amplitudes(grid, P, TrialSpec{eps, E});
      const double element = decay_element(grid, eta, config.form_factor, request.g);
      const double norm = eta.norm();
      const double ratio = std::abs(element) / norm;
      csv << fmt(eps) << ',' << fmt(element) << ',' << fmt(norm) << ',' << fmt(ratio) << '\n';
      rows.push_back({{"epsilon", eps}, {"element", element}, {"eta_norm", norm}, {"ratio", ratio}});
      if (ratio > 0.0) {
        eps_ok.push_back(eps);
        ratio_ok.push_back(ratio);
      }
    } catch (const EmptyWindowError&) {
      ++r.failed_points;
      csv << fmt(eps) << ",nan,0,nan\n";
      rows.push_back({{"epsilon", eps}, {"status", "empty_window"}});
      r.warnings.push_back("no resonant mode within epsilon = " + fmt(eps));
    }
  }
  if (eps_ok.empty()) throw EmptyWindowError("trial-scaling: no epsilon reaches a resonant grid mode");
  json doc = header(config, command);
  doc["rows"] = rows;
  doc["slope"] = eps_ok.size() >= 2 ? json(fit_loglog_slope(eps_ok, ratio_ok)) : json(nullptr);
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  return r;
}

Report run_overlap(const RunConfig& config, const FiberModel& model, const Vec3& P, double g,
                   std::optional<double> half_width) {
  const std::string command = "overlap p=" + fmt_vec(P) + " g=" + fmt(g) + " window=" +
                              (half_width ? fmt(*half_width) : std::string("auto"));
  OverlapOptions options = config.overlap;
  options.half_width = half_width;
  const OverlapDistribution d = vacuum_overlap_distribution(model, P, g, options);

  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), command) << "energy,weight,residual,converged\n";
  for (const auto& e : d.entries) {
    csv << fmt(e.energy) << ',' << fmt(e.weight) << ',' << fmt(e.residual) << ',' << (e.converged ? 1 : 0)
        << '\n';
  }
  json doc = header(config, command);
  doc["P"] = vec_json(P);
  doc["g"] = g;
  doc["center"] = d.center;
  doc["half_width"] = d.half_width;
  doc["gamma_estimate"] = d.gamma_estimate;
  doc["entries"] = d.entries.size();
  doc["krylov_steps"] = d.measure.steps;
  doc["exhausted"] = d.exhausted;
  doc["window_weight"] = d.window_weight;
  doc["captured_weight"] = d.captured_weight;
  doc["mean"] = d.mean;
  doc["variance"] = d.variance;
  doc["spread"] = d.spread;
  doc["max_weight"] = d.max_weight;
  doc["warning"] = d.warning;
  Report r;
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  if (d.warning) r.warnings.push_back("captured weight " + fmt(d.captured_weight) + " below threshold");
  return r;
}

Report run_grid(const RunConfig& config) {
  const MomentumGrid grid = build_config_grid(config);
  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), "grid");
  grid.write_csv(csv);
  Report r;
  json doc = header(config, "grid");
  doc["modes"] = grid.size();
  doc["total_volume"] = grid.total_volume();
  doc["shell_volume"] = grid.k_max() > grid.k_min() ? shell_volume(grid.k_min(), grid.k_max()) : 0.0;
  doc["max_radial_width"] = grid.max_radial_width();
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  return r;
}

Report run_operator(const RunConfig& config, const FiberModel& model, const Vec3& P, double g) {
  const std::string command = "operator p=" + fmt_vec(P) + " g=" + fmt(g);
  const auto H = model.hamiltonian(P, g);
  std::ostringstream out;
  out << csv_preamble(config.fingerprint(), command);
  H.write_triplets(out);
  Report r;
  json doc = header(config, command);
  doc["dimension"] = H.dimension();
  doc["nonzeros"] = H.nonzeros();
  r.json = doc.dump(2) + "\n";
  r.csv = out.str();
  return r;
}

Report run_weights(const RunConfig& config, const ConeSpec& cone, std::size_t samples) {
  if (samples < 2) throw InvalidArgument("weights: need at least two samples");
  cone.validate();
  const std::string command = "weights samples=" + std::to_string(samples);
  std::ostringstream csv;
  csv << csv_preamble(config.fingerprint(), command) << "x";
  for (std::size_t n = 1; n <= config.n_shell_max; ++n) csv << ",chi_" << n;
  csv << ",xi\n";
  // x is r in [0, 2] for the shells and cos theta = x - 1 for the cone.
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    csv << fmt(x);
    for (std::size_t n = 1; n <= config.n_shell_max; ++n) csv << ',' << fmt(shell_weight(ShellSpec{n}, x));
    csv << ',' << fmt(cone_weight_cos(cone, std::clamp(x - 1.0, -1.0, 1.0))) << '\n';
  }
  Report r;
  json doc = header(config, command);
  doc["cone"] = cone_json(cone);
  r.json = doc.dump(2) + "\n";
  r.csv = csv.str();
  return r;
}

}  // namespace fiber
