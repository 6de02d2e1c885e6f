#include "cerenkov_fiber/config.hpp"
#include "cerenkov_fiber/experiments.hpp"
#include "cerenkov_fiber/numeric_format.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace fiber;

TEST_CASE("default config") {
  const RunConfig c = default_config();
  CHECK(c.radial.k_min == doctest::Approx(0.05));
  CHECK(c.radial.k_max == 1.0);
  CHECK(c.form_factor.beta == 1.0);
  CHECK(c.n_max == 2);
  CHECK_NOTHROW(c.validate());
  CHECK(parse_config("{}").canonical_json() == c.canonical_json());
}

TEST_CASE("config sections are read") {
  const RunConfig c = parse_config(R"({
    "grid": {"radial_count": 5, "polar_count": 3, "azimuthal_count": 2, "spacing": "linear"},
    "basis": {"n_max": 1, "e_cut": 1.5},
    "form_factor": {"beta": 0.5, "cutoff": 2.0},
    "solver": {"tolerance": 1e-10, "method": "lanczos", "pairs": 3},
    "scan": {"n_shell_max": 4, "threads": 2},
    "overlap": {"min_pairs": 30}
  })");
  CHECK(c.radial.count == 5);
  CHECK(c.radial.spacing == RadialSpacing::linear);
  CHECK(c.radial.k_min == doctest::Approx(0.1));
  CHECK(c.radial.k_max == 2.0);
  CHECK(c.angular.polar_count == 3);
  CHECK(c.n_max == 1);
  CHECK(*c.e_cut == 1.5);
  CHECK(c.form_factor.beta == 0.5);
  CHECK(c.solver.method == SolverMethod::lanczos);
  CHECK(c.pairs == 3);
  CHECK(c.n_shell_max == 4);
  CHECK(c.threads == 2);
  CHECK(c.overlap.min_pairs == 30);
  const auto model = build_model(c);
  CHECK(model->grid().size() == 30);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"grid": {"bogus": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"k_min": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"k_min": 0.5, "k_max": 0.2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"k_min": 0.5, "k_max": 0.5}})"), ConfigError);
  CHECK_NOTHROW(parse_config(R"({"grid": {"k_min": 0.5, "k_max": 0.5, "radial_count": 1, "cell_volume": 0.1}})"));
  CHECK_THROWS_AS(parse_config(R"({"grid": {"radial_count": "many"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"radial_count": -3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"spacing": "cubic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"form_factor": {"smooth_width": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"method": "magic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"tolerance": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("fingerprint is stable and sensitive") {
  const RunConfig a = parse_config(R"({"grid": {"radial_count": 6}, "basis": {"n_max": 1}})");
  const RunConfig b = parse_config(R"({"basis": {"n_max": 1}, "grid": {"radial_count": 6}})");
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 16);
  const RunConfig c = parse_config(R"({"grid": {"radial_count": 7}, "basis": {"n_max": 1}})");
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(parse_config(a.canonical_json()).canonical_json() == a.canonical_json());
}

TEST_CASE("load config from a file") {
  const std::string path = "test_config_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"({"basis": {"n_max": 3}})";
  }
  CHECK(load_config(path).n_max == 3);
  std::remove(path.c_str());
}

TEST_CASE("budget errors carry the dimension") {
  RunConfig c = default_config();
  c.max_dimension = 100;
  c.n_max = 4;
  try {
    (void)build_model(c);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    CHECK(e.required > 100);
  }
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.0, 1.0, -2.5, 1e-300, 0.1, 1.0 / 3.0, 123456.789e10}) {
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(-0.0) == format_double(0.0));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("experiment reports carry the fingerprint") {
  RunConfig c = parse_config(R"({"grid": {"radial_count": 3, "polar_count": 2}, "basis": {"n_max": 1}})");
  const auto model = build_model(c);
  const Report r = run_spectrum(c, *model, Vec3(0, 0, 0.5), 0.2, 2);
  CHECK(r.csv.rfind("# fingerprint=" + c.fingerprint(), 0) == 0);
  CHECK(r.json.find(c.fingerprint()) != std::string::npos);
  const Report again = run_spectrum(c, *model, Vec3(0, 0, 0.5), 0.2, 2);
  CHECK(r.csv == again.csv);
  CHECK(r.json == again.json);
}
