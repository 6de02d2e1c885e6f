#include "cerenkov_fiber/cerenkov_fiber.h"

#include "cerenkov_fiber/cerenkov.hpp"
#include "cerenkov_fiber/config.hpp"
#include "cerenkov_fiber/experiments.hpp"
#include "cerenkov_fiber/mass_shell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <thread>

struct cf_config {
  fiber::RunConfig config;
  std::string fingerprint;
  std::string canonical;

  void refresh() {
    canonical = config.canonical_json();
    fingerprint = config.fingerprint();
  }
};

struct cf_model {
  fiber::RunConfig config;
  std::shared_ptr<const fiber::FiberModel> model;
};

struct cf_result {
  fiber::Report report;
};

namespace {

thread_local std::string last_error;

cf_status status_of(fiber::ErrorKind kind) {
  switch (kind) {
    case fiber::ErrorKind::invalid_argument:
      return CF_ERR_INVALID_ARGUMENT;
    case fiber::ErrorKind::config:
      return CF_ERR_CONFIG;
    case fiber::ErrorKind::budget:
      return CF_ERR_BUDGET;
    case fiber::ErrorKind::lookup:
      return CF_ERR_LOOKUP;
    case fiber::ErrorKind::solver:
      return CF_ERR_SOLVER;
    case fiber::ErrorKind::resonant:
      return CF_ERR_RESONANT;
    case fiber::ErrorKind::empty_window:
      return CF_ERR_EMPTY_WINDOW;
    case fiber::ErrorKind::io:
      return CF_ERR_IO;
  }
  return CF_ERR_INTERNAL;
}

template <typename F>
cf_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return CF_OK;
  } catch (const fiber::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw fiber::InvalidArgument(std::string(what) + " must not be null");
}

fiber::Vec3 vec(const double P[3]) {
  require(P, "P");
  const fiber::Vec3 v(P[0], P[1], P[2]);
  if (!v.allFinite()) throw fiber::InvalidArgument("P must be finite");
  return v;
}

void check_coupling(double g) {
  if (!std::isfinite(g)) throw fiber::InvalidArgument("g must be finite");
}

cf_status emit(cf_result** out, const std::function<fiber::Report()>& make) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto r = std::make_unique<cf_result>();
    r->report = make();
    *out = r.release();
  });
}

std::size_t resolve_threads(std::size_t configured) {
  std::size_t threads = configured;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CERENKOV_FIBER_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) threads = std::min<std::size_t>(threads, cap);
  }
  return threads;
}

fiber::ConeSpec cone_of(const cf_cone& c) {
  fiber::ConeSpec spec;
  spec.axis = fiber::Vec3(c.axis[0], c.axis[1], c.axis[2]);
  if (!(spec.axis.norm() > 0.0)) throw fiber::InvalidArgument("cone axis must be nonzero");
  switch (c.kind) {
    case CF_CONE_FORWARD:
      spec.kind = fiber::ConeKind::forward;
      break;
    case CF_CONE_DOUBLE:
      spec.kind = fiber::ConeKind::double_cone;
      break;
    case CF_CONE_COMPLEMENT:
      spec.kind = fiber::ConeKind::complement_double;
      break;
    default:
      throw fiber::InvalidArgument("unknown cone kind");
  }
  spec.plateau_cos = c.plateau_cos;
  spec.support_cos = c.support_cos;
  spec.validate();
  return spec;
}

cf_status make_config(cf_config** out, const std::function<fiber::RunConfig()>& make) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<cf_config>();
    c->config = make();
    c->refresh();
    *out = c.release();
  });
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_last_error(void) { return last_error.c_str(); }

const char* cf_status_name(cf_status status) {
  switch (status) {
    case CF_OK:
      return "ok";
    case CF_ERR_INVALID_ARGUMENT:
      return fiber::to_string(fiber::ErrorKind::invalid_argument);
    case CF_ERR_CONFIG:
      return fiber::to_string(fiber::ErrorKind::config);
    case CF_ERR_BUDGET:
      return fiber::to_string(fiber::ErrorKind::budget);
    case CF_ERR_LOOKUP:
      return fiber::to_string(fiber::ErrorKind::lookup);
    case CF_ERR_SOLVER:
      return fiber::to_string(fiber::ErrorKind::solver);
    case CF_ERR_RESONANT:
      return fiber::to_string(fiber::ErrorKind::resonant);
    case CF_ERR_EMPTY_WINDOW:
      return fiber::to_string(fiber::ErrorKind::empty_window);
    case CF_ERR_IO:
      return fiber::to_string(fiber::ErrorKind::io);
    case CF_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

cf_status cf_config_default(cf_config** out) {
  return make_config(out, [] { return fiber::default_config(); });
}

cf_status cf_config_parse(const char* json, cf_config** out) {
  return make_config(out, [&] {
    require(json, "json");
    return fiber::parse_config(json);
  });
}

cf_status cf_config_load(const char* path, cf_config** out) {
  return make_config(out, [&] {
    require(path, "path");
    return fiber::load_config(path);
  });
}

void cf_config_free(cf_config* config) { delete config; }

const char* cf_config_fingerprint(const cf_config* config) {
  return config ? config->fingerprint.c_str() : "";
}

const char* cf_config_canonical(const cf_config* config) {
  return config ? config->canonical.c_str() : "";
}

cf_status cf_config_set_threads(cf_config* config, size_t threads) {
  return guarded([&] {
    require(config, "config");
    config->config.threads = threads;
    config->refresh();
  });
}

cf_status cf_model_create(const cf_config* config, cf_model** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<cf_model>();
    m->config = config->config;
    m->model = fiber::build_model(config->config);
    *out = m.release();
  });
}

void cf_model_free(cf_model* model) { delete model; }

size_t cf_model_dimension(const cf_model* model) { return model ? model->model->dimension() : 0; }

size_t cf_model_modes(const cf_model* model) { return model ? model->model->grid().size() : 0; }

cf_status cf_model_ground_energy(const cf_model* model, const double P[3], double g, double* energy) {
  return guarded([&] {
    require(model, "model");
    require(energy, "energy");
    check_coupling(g);
    *energy = fiber::ground_energy(*model->model, vec(P), g, model->config.solver);
  });
}

cf_status cf_run_spectrum(const cf_model* model, const double P[3], double g, size_t pairs,
                          cf_result** out) {
  return emit(out, [&] {
    require(model, "model");
    check_coupling(g);
    return fiber::run_spectrum(model->config, *model->model, vec(P), g,
                               pairs == 0 ? model->config.pairs : pairs);
  });
}

cf_status cf_run_scan(const cf_model* model, double p_min, double p_max, size_t steps, double g,
                      cf_result** out) {
  return emit(out, [&] {
    require(model, "model");
    check_coupling(g);
    fiber::ScanRequest request;
    request.p_min = p_min;
    request.p_max = p_max;
    request.steps = steps;
    request.g = g;
    request.threads = resolve_threads(model->config.threads);
    return fiber::run_scan(model->config, *model->model, request);
  });
}

cf_status cf_run_virial(const cf_model* model, const double P[3], double g, double kappa, size_t shell,
                        const cf_cone* cone, int perpendicular, cf_result** out) {
  return emit(out, [&] {
    require(model, "model");
    check_coupling(g);
    fiber::VirialRequest request;
    request.kappa = kappa;
    if (shell > 0) request.shell = shell;
    if (cone) request.cone = cone_of(*cone);
    request.mode = perpendicular ? fiber::DilationMode::perpendicular : fiber::DilationMode::parallel;
    return fiber::run_virial(model->config, *model->model, vec(P), g, request);
  });
}

cf_status cf_run_cerenkov(const double P[3], double energy, size_t thetas, cf_result** out) {
  return emit(out, [&] {
    std::optional<double> e;
    if (!std::isnan(energy)) e = energy;
    return fiber::run_cerenkov(vec(P), e, thetas);
  });
}

cf_status cf_run_golden_rule(const cf_config* config, const double P[3], double g, cf_result** out) {
  return emit(out, [&] {
    require(config, "config");
    check_coupling(g);
    return fiber::run_golden_rule(config->config, vec(P), g);
  });
}

cf_status cf_run_trial_scaling(const cf_config* config, const double P[3], double energy, double g,
                               double eps_min, double eps_max, size_t points, cf_result** out) {
  return emit(out, [&] {
    require(config, "config");
    check_coupling(g);
    fiber::TrialScalingRequest request;
    request.eps_min = eps_min;
    request.eps_max = eps_max;
    request.points = points;
    request.g = g;
    if (!std::isnan(energy)) request.energy = energy;
    return fiber::run_trial_scaling(config->config, vec(P), request);
  });
}

cf_status cf_run_overlap(const cf_model* model, const double P[3], double g, double half_width,
                         cf_result** out) {
  return emit(out, [&] {
    require(model, "model");
    check_coupling(g);
    std::optional<double> w;
    if (!std::isnan(half_width)) w = half_width;
    return fiber::run_overlap(model->config, *model->model, vec(P), g, w);
  });
}

cf_status cf_run_grid(const cf_config* config, cf_result** out) {
  return emit(out, [&] {
    require(config, "config");
    return fiber::run_grid(config->config);
  });
}

cf_status cf_run_operator(const cf_model* model, const double P[3], double g, cf_result** out) {
  return emit(out, [&] {
    require(model, "model");
    check_coupling(g);
    return fiber::run_operator(model->config, *model->model, vec(P), g);
  });
}

cf_status cf_run_weights(const cf_config* config, const cf_cone* cone, size_t samples, cf_result** out) {
  return emit(out, [&] {
    require(config, "config");
    const fiber::ConeSpec spec = cone ? cone_of(*cone) : fiber::ConeSpec{};
    return fiber::run_weights(config->config, spec, samples);
  });
}

const char* cf_result_json(const cf_result* result) { return result ? result->report.json.c_str() : ""; }

const char* cf_result_csv(const cf_result* result) { return result ? result->report.csv.c_str() : ""; }

size_t cf_result_failed_points(const cf_result* result) {
  return result ? result->report.failed_points : 0;
}

size_t cf_result_warning_count(const cf_result* result) {
  return result ? result->report.warnings.size() : 0;
}

const char* cf_result_warning(const cf_result* result, size_t index) {
  if (!result || index >= result->report.warnings.size()) return "";
  return result->report.warnings[index].c_str();
}

void cf_result_free(cf_result* result) { delete result; }

cf_status cf_form_factor(const cf_config* config, double r, double* value, double* derivative) {
  return guarded([&] {
    require(config, "config");
    if (!(r >= 0.0)) throw fiber::InvalidArgument("r must be nonnegative");
    const auto& ff = config->config.form_factor;
    if (value) *value = ff.value(r);
    if (derivative) *derivative = ff.derivative(r);
  });
}

cf_status cf_resonance_roots(double P, double energy, double cos_theta, double roots[2], size_t* count) {
  return guarded([&] {
    require(roots, "roots");
    require(count, "count");
    const auto r = fiber::resonance_momentum(P, energy, cos_theta);
    *count = r.size();
    for (std::size_t i = 0; i < 2; ++i) roots[i] = i < r.size() ? r[i] : std::nan("");
  });
}

cf_status cf_cerenkov_threshold(double P, int* has_threshold, double* cos_theta) {
  return guarded([&] {
    require(has_threshold, "has_threshold");
    const auto t = fiber::cerenkov_threshold(P);
    *has_threshold = t ? 1 : 0;
    if (cos_theta) *cos_theta = t.value_or(std::nan(""));
  });
}

cf_status cf_golden_rule_rate(const cf_config* config, double P, double g, double* rate) {
  return guarded([&] {
    require(config, "config");
    require(rate, "rate");
    check_coupling(g);
    *rate = fiber::golden_rule_rate(P, g, config->config.form_factor);
  });
}

}  // extern "C"
