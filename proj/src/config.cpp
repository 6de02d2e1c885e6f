#include "cerenkov_fiber/config.hpp"

#include "cerenkov_fiber/numeric_format.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fiber {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::string& section,
                    const std::set<std::string>& known) {
  if (!object.is_object()) throw ConfigError("config: '" + section + "' must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + (section.empty() ? key : section + "." + key) + "'");
    }
  }
}

template <typename T>
void read(const json& object, const std::string& section, const char* key, T& out) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw ConfigError("");
      out = it->template get<double>();
    } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!it->is_number_unsigned()) throw ConfigError("");
      out = it->template get<T>();
    } else {
      out = it->template get<T>();
    }
  } catch (const std::exception&) {
    throw ConfigError("config: '" + section + "." + key + "' has the wrong type");
  }
}

template <typename T>
void read_optional(const json& object, const std::string& section, const char* key,
                   std::optional<T>& out) {
  const auto it = object.find(key);
  if (it == object.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(object, section, key, value);
  out = value;
}

const char* spacing_name(RadialSpacing s) { return s == RadialSpacing::linear ? "linear" : "geometric"; }

const char* method_name(SolverMethod m) {
  switch (m) {
    case SolverMethod::dense:
      return "dense";
    case SolverMethod::lanczos:
      return "lanczos";
    default:
      return "auto";
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.radial.k_min = 0.05 * c.form_factor.cutoff;
  c.radial.k_max = c.form_factor.cutoff;
  return c;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (doc.is_null()) doc = json::object();
  reject_unknown(doc, "", {"grid", "basis", "form_factor", "solver", "scan", "overlap"});

  RunConfig c;
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& {
    const auto it = doc.find(name);
    return it == doc.end() || it->is_null() ? empty : *it;
  };

  const json& ff = section("form_factor");
  reject_unknown(ff, "form_factor", {"amplitude", "beta", "cutoff", "smooth_width"});
  read(ff, "form_factor", "amplitude", c.form_factor.amplitude);
  read(ff, "form_factor", "beta", c.form_factor.beta);
  read(ff, "form_factor", "cutoff", c.form_factor.cutoff);
  read(ff, "form_factor", "smooth_width", c.form_factor.smooth_width);

  const json& grid = section("grid");
  reject_unknown(grid, "grid", {"k_min", "k_max", "radial_count", "spacing", "polar_count",
                                "azimuthal_count", "cell_volume", "mode_budget"});
  c.radial.k_min = 0.05 * c.form_factor.cutoff;
  c.radial.k_max = c.form_factor.cutoff;
  read(grid, "grid", "k_min", c.radial.k_min);
  read(grid, "grid", "k_max", c.radial.k_max);
  read(grid, "grid", "radial_count", c.radial.count);
  std::string spacing = "geometric";
  read(grid, "grid", "spacing", spacing);
  if (spacing == "geometric") {
    c.radial.spacing = RadialSpacing::geometric;
  } else if (spacing == "linear") {
    c.radial.spacing = RadialSpacing::linear;
  } else {
    throw ConfigError("config: grid.spacing must be 'geometric' or 'linear'");
  }
  read(grid, "grid", "polar_count", c.angular.polar_count);
  read(grid, "grid", "azimuthal_count", c.angular.azimuthal_count);
  read_optional(grid, "grid", "cell_volume", c.radial.cell_volume);
  read(grid, "grid", "mode_budget", c.mode_budget);

  const json& basis = section("basis");
  reject_unknown(basis, "basis", {"n_max", "e_cut", "max_dimension"});
  read(basis, "basis", "n_max", c.n_max);
  read_optional(basis, "basis", "e_cut", c.e_cut);
  read(basis, "basis", "max_dimension", c.max_dimension);

  const json& solver = section("solver");
  reject_unknown(solver, "solver", {"tolerance", "max_iterations", "krylov_dim", "method",
                                    "dense_threshold", "seed", "pairs"});
  read(solver, "solver", "tolerance", c.solver.tolerance);
  read(solver, "solver", "max_iterations", c.solver.max_iterations);
  read(solver, "solver", "krylov_dim", c.solver.krylov_dim);
  std::string method = "auto";
  read(solver, "solver", "method", method);
  if (method == "auto") {
    c.solver.method = SolverMethod::automatic;
  } else if (method == "dense") {
    c.solver.method = SolverMethod::dense;
  } else if (method == "lanczos") {
    c.solver.method = SolverMethod::lanczos;
  } else {
    throw ConfigError("config: solver.method must be 'auto', 'dense' or 'lanczos'");
  }
  read(solver, "solver", "dense_threshold", c.solver.dense_threshold);
  read(solver, "solver", "seed", c.solver.seed);
  read(solver, "solver", "pairs", c.pairs);

  const json& scan = section("scan");
  reject_unknown(scan, "scan", {"n_shell_max", "grad_step", "curvature_step", "threads"});
  read(scan, "scan", "n_shell_max", c.n_shell_max);
  read(scan, "scan", "grad_step", c.grad_step);
  read(scan, "scan", "curvature_step", c.curvature_step);
  read(scan, "scan", "threads", c.threads);

  const json& overlap = section("overlap");
  reject_unknown(overlap, "overlap",
                 {"max_steps", "min_pairs", "converged_tolerance", "capture_threshold"});
  read(overlap, "overlap", "max_steps", c.overlap.max_steps);
  read(overlap, "overlap", "min_pairs", c.overlap.min_pairs);
  read(overlap, "overlap", "converged_tolerance", c.overlap.converged_tolerance);
  read(overlap, "overlap", "capture_threshold", c.overlap.capture_threshold);

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void RunConfig::validate() const {
  try {
    form_factor.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  require(std::isfinite(radial.k_min) && radial.k_min > 0.0, "grid.k_min must be positive");
  const bool degenerate = radial.k_max == radial.k_min;
  require(std::isfinite(radial.k_max) && (radial.k_max > radial.k_min || degenerate),
          "grid.k_max must exceed grid.k_min");
  require(!degenerate || (radial.count == 1 && radial.cell_volume && *radial.cell_volume > 0.0),
          "grid.k_max == grid.k_min needs radial_count 1 and a positive cell_volume");
  require(radial.count >= 1 && angular.polar_count >= 1 && angular.azimuthal_count >= 1,
          "grid node counts must be at least 1");
  require(mode_budget >= 1, "grid.mode_budget must be at least 1");
  require(!e_cut || (std::isfinite(*e_cut) && *e_cut >= 0.0), "basis.e_cut must be nonnegative");
  require(max_dimension >= 1, "basis.max_dimension must be at least 1");
  require(std::isfinite(solver.tolerance) && solver.tolerance > 0.0, "solver.tolerance must be positive");
  require(solver.max_iterations >= 1, "solver.max_iterations must be at least 1");
  require(solver.krylov_dim >= 4, "solver.krylov_dim must be at least 4");
  require(pairs >= 1, "solver.pairs must be at least 1");
  require(n_shell_max >= 1, "scan.n_shell_max must be at least 1");
  require(std::isfinite(grad_step) && grad_step > 0.0, "scan.grad_step must be positive");
  require(std::isfinite(curvature_step) && curvature_step > 0.0, "scan.curvature_step must be positive");
  require(overlap.max_steps >= 1, "overlap.max_steps must be at least 1");
  require(overlap.converged_tolerance > 0.0, "overlap.converged_tolerance must be positive");
  require(overlap.capture_threshold >= 0.0 && overlap.capture_threshold <= 1.0,
          "overlap.capture_threshold must lie in [0, 1]");
}

std::string RunConfig::canonical_json() const {
  json doc;
  doc["grid"] = {{"k_min", radial.k_min},
                 {"k_max", radial.k_max},
                 {"radial_count", radial.count},
                 {"spacing", spacing_name(radial.spacing)},
                 {"polar_count", angular.polar_count},
                 {"azimuthal_count", angular.azimuthal_count},
                 {"cell_volume", optional_number(radial.cell_volume)},
                 {"mode_budget", mode_budget}};
  doc["basis"] = {{"n_max", n_max}, {"e_cut", optional_number(e_cut)}, {"max_dimension", max_dimension}};
  doc["form_factor"] = {{"amplitude", form_factor.amplitude},
                        {"beta", form_factor.beta},
                        {"cutoff", form_factor.cutoff},
                        {"smooth_width", form_factor.smooth_width}};
  doc["solver"] = {{"tolerance", solver.tolerance},
                   {"max_iterations", solver.max_iterations},
                   {"krylov_dim", solver.krylov_dim},
                   {"method", method_name(solver.method)},
                   {"dense_threshold", solver.dense_threshold},
                   {"seed", solver.seed},
                   {"pairs", pairs}};
  doc["scan"] = {{"n_shell_max", n_shell_max},
                 {"grad_step", grad_step},
                 {"curvature_step", curvature_step},
                 {"threads", threads}};
  doc["overlap"] = {{"max_steps", overlap.max_steps},
                    {"min_pairs", overlap.min_pairs},
                    {"converged_tolerance", overlap.converged_tolerance},
                    {"capture_threshold", overlap.capture_threshold}};
  return doc.dump();
}

std::string RunConfig::fingerprint() const { return fnv1a_hex(canonical_json()); }

MomentumGrid build_config_grid(const RunConfig& config) {
  return build_grid(config.radial, config.angular, config.mode_budget);
}

std::shared_ptr<const FiberModel> build_model(const RunConfig& config) {
  config.validate();
  auto grid = std::make_shared<const MomentumGrid>(build_config_grid(config));
  auto basis = std::make_shared<const FockBasis>(
      build_basis(grid, config.n_max, config.e_cut, config.max_dimension));
  return std::make_shared<const FiberModel>(basis, config.form_factor);
}

}  // namespace fiber
