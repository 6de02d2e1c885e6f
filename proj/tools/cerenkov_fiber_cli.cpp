// Command-line front end over the C API.
//
// Exit codes: 0 success, 1 usage or validation error, 2 solver failure.
// Errors are reported as a single JSON line on stderr:
//   {"error":"<kind>","message":"..."}

#include "cerenkov_fiber/cerenkov_fiber.h"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << "{\"error\":\"" << json_escape(kind) << "\",\"message\":\"" << json_escape(message)
            << "\",\"exit_code\":" << code << "}\n";
  return code;
}

struct Failure {
  cf_status status;
};

void check(cf_status status) {
  if (status != CF_OK) throw Failure{status};
}

int exit_code_for(cf_status status) { return status == CF_ERR_SOLVER ? kExitSolver : kExitValidation; }

// Owning wrappers for the C handles.
struct Config {
  cf_config* ptr = nullptr;
  ~Config() { cf_config_free(ptr); }
};
struct Model {
  cf_model* ptr = nullptr;
  ~Model() { cf_model_free(ptr); }
};
struct Result {
  cf_result* ptr = nullptr;
  ~Result() { cf_result_free(ptr); }
};

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--p", "expected PX,PY,PZ");
    }
    if (used != item.size()) throw CLI::ValidationError("--p", "expected PX,PY,PZ");
    out.push_back(v);
  }
  if (out.size() != 3) throw CLI::ValidationError("--p", "expected three comma-separated components");
  return out;
}

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string p_text;
  double g = 0.0;
  std::size_t pairs = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  std::size_t steps = 0;
  std::string kappa = "inf";
  std::string sector;
  double cone_plateau = 0.9;
  double cone_support = 0.8;
  bool perpendicular = false;
  double energy = std::numeric_limits<double>::quiet_NaN();
  std::size_t thetas = 0;
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  std::size_t points = 9;
  std::string window = "auto";
  std::size_t samples = 201;
  std::size_t threads = 0;
};

void load_config(const Options& o, Config& c) {
  if (o.config_path.empty()) {
    check(cf_config_default(&c.ptr));
  } else {
    check(cf_config_load(o.config_path.c_str(), &c.ptr));
  }
  if (o.threads > 0) check(cf_config_set_threads(c.ptr, o.threads));
}

double parse_number(const std::string& flag, const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "not a number: " + text);
  }
  if (used != text.size()) throw CLI::ValidationError(flag, "not a number: " + text);
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Writes the outputs of a result and prints a one-line summary on stdout.
int finish(const Options& o, const Result& r, const std::string& stem, bool json, bool csv,
           const std::string& csv_ext = ".csv") {
  std::filesystem::create_directories(o.out_dir);
  std::vector<std::string> written;
  if (json) {
    const auto path = std::filesystem::path(o.out_dir) / (stem + ".json");
    write_file(path, cf_result_json(r.ptr));
    written.push_back(path.string());
  }
  if (csv) {
    const auto path = std::filesystem::path(o.out_dir) / (stem + csv_ext);
    write_file(path, cf_result_csv(r.ptr));
    written.push_back(path.string());
  }
  for (std::size_t i = 0; i < cf_result_warning_count(r.ptr); ++i) {
    std::cerr << "warning: " << cf_result_warning(r.ptr, i) << '\n';
  }
  const std::size_t failed = cf_result_failed_points(r.ptr);
  std::cout << "{\"status\":\"" << (failed > 0 ? "partial" : "ok") << "\",\"outputs\":[";
  for (std::size_t i = 0; i < written.size(); ++i) {
    std::cout << (i ? "," : "") << '"' << json_escape(written[i]) << '"';
  }
  std::cout << "],\"failed_points\":" << failed << "}\n";
  return failed > 0 ? kExitSolver : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber Hamiltonian spectra, virial residuals and Cerenkov diagnostics"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--out", o.out_dir, "Output directory");
  };
  auto add_p = [&](CLI::App* sub) { sub->add_option("--p", o.p_text, "Total momentum PX,PY,PZ")->required(); };
  auto add_g = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--g", o.g, "Coupling constant");
    if (required) opt->required();
  };

  auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenpairs of H_P");
  add_common(spectrum);
  add_p(spectrum);
  add_g(spectrum, true);
  spectrum->add_option("--pairs", o.pairs, "Number of eigenpairs");

  auto* scan = app.add_subcommand("scan", "Mass-shell scan over |P| along the grid axis");
  add_common(scan);
  scan->add_option("--pmin", o.p_min, "Smallest |P|")->required();
  scan->add_option("--pmax", o.p_max, "Largest |P|")->required();
  scan->add_option("--steps", o.steps, "Number of points")->required();
  add_g(scan, true);
  scan->add_option("--threads", o.threads, "Worker threads (capped by CERENKOV_FIBER_THREADS)");

  auto* virial = app.add_subcommand("virial", "Virial residual on the ground state");
  add_common(virial);
  add_p(virial);
  add_g(virial, true);
  virial->add_option("--kappa", o.kappa, "Window parameter kappa or inf");
  virial->add_option("--sector", o.sector, "Sector residual: n[,forward|double|complement]");
  virial->add_option("--cone-plateau", o.cone_plateau, "Cone plateau cosine");
  virial->add_option("--cone-support", o.cone_support, "Cone support cosine");
  virial->add_flag("--perp", o.perpendicular, "Perpendicular dilation generator");

  auto* cerenkov = app.add_subcommand("cerenkov", "Resonance momenta over a cos(theta) sample");
  add_common(cerenkov);
  add_p(cerenkov);
  cerenkov->add_option("--e", o.energy, "Energy (default P^2/2)");
  cerenkov->add_option("--thetas", o.thetas, "Number of angles")->required();

  auto* golden = app.add_subcommand("golden-rule", "Golden-rule decay rate of the bare state");
  add_common(golden);
  add_p(golden);
  add_g(golden, true);

  auto* trial = app.add_subcommand("trial-scaling", "Trial-state decay element versus epsilon");
  add_common(trial);
  add_p(trial);
  add_g(trial, false);
  o.g = 1.0;
  trial->add_option("--e", o.energy, "Target energy (default P^2/2)");
  trial->add_option("--eps-min", o.eps_min, "Smallest epsilon");
  trial->add_option("--eps-max", o.eps_max, "Largest epsilon");
  trial->add_option("--points", o.points, "Number of epsilon values");

  auto* overlap = app.add_subcommand("overlap", "Vacuum overlap distribution near P^2/2");
  add_common(overlap);
  add_p(overlap);
  add_g(overlap, true);
  overlap->add_option("--window", o.window, "Half-width or auto");

  auto* grid = app.add_subcommand("grid", "Dump the momentum grid");
  add_common(grid);

  auto* op = app.add_subcommand("operator", "Dump H_P as row col value triplets");
  add_common(op);
  add_p(op);
  add_g(op, true);

  auto* weights = app.add_subcommand("weights", "Tabulate shell and cone weights");
  add_common(weights);
  weights->add_option("--samples", o.samples, "Number of samples");
  weights->add_option("--cone-plateau", o.cone_plateau, "Cone plateau cosine");
  weights->add_option("--cone-support", o.cone_support, "Cone support cosine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what(), kExitUsage);
  }

  try {
    Config config;
    load_config(o, config);
    Result r;
    std::vector<double> P;
    if (!o.p_text.empty()) P = parse_vector(o.p_text);

    if (spectrum->parsed()) {
      Model m;
      check(cf_model_create(config.ptr, &m.ptr));
      check(cf_run_spectrum(m.ptr, P.data(), o.g, o.pairs, &r.ptr));
      return finish(o, r, "spectrum", true, true);
    }
    if (scan->parsed()) {
      Model m;
      check(cf_model_create(config.ptr, &m.ptr));
      check(cf_run_scan(m.ptr, o.p_min, o.p_max, o.steps, o.g, &r.ptr));
      return finish(o, r, "scan", true, true);
    }
    if (virial->parsed()) {
      const double kappa = parse_number("--kappa", o.kappa);
      std::size_t shell = 0;
      cf_cone cone{{P[0], P[1], P[2]}, CF_CONE_FORWARD, o.cone_plateau, o.cone_support};
      bool with_cone = false;
      if (!o.sector.empty()) {
        const auto comma = o.sector.find(',');
        const std::string n_text = o.sector.substr(0, comma);
        const double n = parse_number("--sector", n_text);
        if (!(n >= 1.0) || n != std::floor(n)) throw CLI::ValidationError("--sector", "n must be a positive integer");
        shell = static_cast<std::size_t>(n);
        if (comma != std::string::npos) {
          const std::string kind = o.sector.substr(comma + 1);
          with_cone = true;
          if (kind == "forward") {
            cone.kind = CF_CONE_FORWARD;
          } else if (kind == "double") {
            cone.kind = CF_CONE_DOUBLE;
          } else if (kind == "complement") {
            cone.kind = CF_CONE_COMPLEMENT;
          } else {
            throw CLI::ValidationError("--sector", "cone must be forward, double or complement");
          }
          if (!(std::hypot(P[0], P[1], P[2]) > 0.0)) {
            cone.axis[0] = 0.0;
            cone.axis[1] = 0.0;
            cone.axis[2] = 1.0;
          }
        }
      }
      Model m;
      check(cf_model_create(config.ptr, &m.ptr));
      check(cf_run_virial(m.ptr, P.data(), o.g, kappa, shell, with_cone ? &cone : nullptr,
                          o.perpendicular ? 1 : 0, &r.ptr));
      return finish(o, r, "virial", true, false);
    }
    if (cerenkov->parsed()) {
      check(cf_run_cerenkov(P.data(), o.energy, o.thetas, &r.ptr));
      return finish(o, r, "cerenkov", false, true);
    }
    if (golden->parsed()) {
      check(cf_run_golden_rule(config.ptr, P.data(), o.g, &r.ptr));
      return finish(o, r, "golden_rule", true, false);
    }
    if (trial->parsed()) {
      check(cf_run_trial_scaling(config.ptr, P.data(), o.energy, o.g, o.eps_min, o.eps_max, o.points,
                                 &r.ptr));
      return finish(o, r, "trial_scaling", true, true);
    }
    if (overlap->parsed()) {
      const double w = o.window == "auto" ? std::numeric_limits<double>::quiet_NaN()
                                          : parse_number("--window", o.window);
      Model m;
      check(cf_model_create(config.ptr, &m.ptr));
      check(cf_run_overlap(m.ptr, P.data(), o.g, w, &r.ptr));
      return finish(o, r, "overlap", true, true);
    }
    if (grid->parsed()) {
      check(cf_run_grid(config.ptr, &r.ptr));
      return finish(o, r, "grid", true, true);
    }
    if (op->parsed()) {
      Model m;
      check(cf_model_create(config.ptr, &m.ptr));
      check(cf_run_operator(m.ptr, P.data(), o.g, &r.ptr));
      return finish(o, r, "operator", true, true, ".txt");
    }
    if (weights->parsed()) {
      cf_cone cone{{0.0, 0.0, 1.0}, CF_CONE_FORWARD, o.cone_plateau, o.cone_support};
      check(cf_run_weights(config.ptr, &cone, o.samples, &r.ptr));
      return finish(o, r, "weights", true, true);
    }
  } catch (const Failure& f) {
    return report_error(cf_status_name(f.status), cf_last_error(), exit_code_for(f.status));
  } catch (const CLI::ValidationError& e) {
    return report_error("usage_error", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return report_error("io_error", e.what(), kExitValidation);
  }
  return kExitValidation;
}
