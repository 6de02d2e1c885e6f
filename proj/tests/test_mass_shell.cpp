#include "cerenkov_fiber/mass_shell.hpp"
#include "cerenkov_fiber/overlap.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace fiber;

namespace {

std::shared_ptr<const MomentumGrid> axis_grid(std::size_t radial = 4, std::size_t polar = 3,
                                              std::size_t azimuthal = 4) {
  RadialSpec r;
  r.k_min = 0.05;
  r.k_max = 1.0;
  r.count = radial;
  AngularSpec a;
  a.polar_count = polar;
  a.azimuthal_count = azimuthal;
  return std::make_shared<const MomentumGrid>(build_grid(r, a));
}

std::shared_ptr<const FiberModel> make_model(std::shared_ptr<const MomentumGrid> grid,
                                             std::size_t n_max, FormFactor ff = {},
                                             std::optional<double> e_cut = std::nullopt) {
  auto basis = std::make_shared<const FockBasis>(build_basis(std::move(grid), n_max, e_cut));
  return std::make_shared<const FiberModel>(basis, ff);
}

std::shared_ptr<const MomentumGrid> one_mode(const Vec3& k, double vol) {
  Mode m;
  m.k = k;
  m.vol = vol;
  return std::make_shared<const MomentumGrid>(MomentumGrid::from_modes({m}));
}

}  // namespace

TEST_CASE("free scan below threshold: E = P^2/2 and derivatives") {
  const auto model = make_model(axis_grid(), 2);
  ScanSpec spec;
  spec.p_min = 0.2;
  spec.p_max = 0.8;
  spec.steps = 4;
  spec.g = 0.0;
  const auto scan = mass_shell_scan(*model, spec);
  REQUIRE(scan.rows.size() == 4);
  for (const auto& row : scan.rows) {
    REQUIRE(row.ok);
    CHECK(row.energy == doctest::Approx(0.5 * row.p * row.p).epsilon(1e-12));
    CHECK(row.grad_fh == doctest::Approx(row.p).epsilon(1e-12));
    CHECK(row.grad_fd == doctest::Approx(row.p).epsilon(1e-8));
    CHECK(row.curvature == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(row.vacuum_overlap == doctest::Approx(1.0));
    CHECK(row.cluster_size == 1);
    CHECK(row.shell_numbers.size() == 3);
    for (double n : row.shell_numbers) CHECK(n < 1e-20);
  }
}

TEST_CASE("free ground energy equals the brute-force minimum") {
  const auto grid = axis_grid(3, 3, 2);
  const auto model = make_model(grid, 2);
  for (double p : {0.5, 1.5, 2.5}) {
    const Vec3 P(0, 0, p);
    const double expected = oracle::brute_force_free_minimum(*grid, P, 2);
    CHECK(ground_energy(*model, P, 0.0) == doctest::Approx(expected).epsilon(1e-12));
  }
  // Above threshold the free minimum leaves the vacuum.
  CHECK(oracle::brute_force_free_minimum(*grid, Vec3(0, 0, 1.5), 2) < 0.5 * 1.5 * 1.5);
}

TEST_CASE("single-mode second-order energy closed form") {
  const Vec3 k(0, 0, 0.4);
  const double vol = 0.3;
  const FormFactor ff;
  const auto grid = one_mode(k, vol);
  const Vec3 P(0, 0, 0.5);
  const double gap = 0.5 * 0.4 * 0.4 - 0.5 * 0.4 + 0.4;
  CHECK(second_order_energy(P, ff, *grid) == doctest::Approx(-vol * 0.16 / gap).epsilon(1e-14));

  // Two-level system: exact lowest eigenvalue of [[a, c], [c, a + gap]].
  const auto model = make_model(grid, 1, ff);
  const double g = 0.05;
  const double a = 0.5 * P.squaredNorm();
  const double c = g * std::sqrt(vol) * 0.4;
  const double exact = a + 0.5 * gap - std::sqrt(0.25 * gap * gap + c * c);
  CHECK(ground_energy(*model, P, g) == doctest::Approx(exact).epsilon(1e-13));
  const double shift = exact - a;
  CHECK(g * g * second_order_energy(P, ff, *grid) == doctest::Approx(shift).epsilon(0.01));
}

TEST_CASE("second-order energy reports the resonant mode") {
  std::vector<Mode> ms(2);
  ms[0].k = Vec3(0.3, 0, 0);
  ms[1].k = Vec3(0, 0, 0.5);
  ms[0].vol = ms[1].vol = 0.1;
  const auto grid = MomentumGrid::from_modes(ms);
  // gap for mode 1 at |P| = 1.5 along it: 0.125 - 0.75 + 0.5 < 0.
  try {
    (void)second_order_energy(Vec3(0, 0, 1.5), FormFactor{}, grid);
    FAIL("expected a resonance");
  } catch (const ResonanceError& e) {
    CHECK(e.mode == 1);
  }
  CHECK_NOTHROW(second_order_energy(Vec3(0, 0, 0.5), FormFactor{}, grid));
}

TEST_CASE("second-order energy tracks diagonalization at weak coupling") {
  const auto grid = axis_grid(4, 3, 4);
  const auto model = make_model(grid, 2);
  const Vec3 P(0, 0, 0.5);
  const double e2 = second_order_energy(P, model->form_factor(), *grid);
  for (double g : {0.05, 0.1}) {
    const double shift = ground_energy(*model, P, g) - 0.5 * P.squaredNorm();
    CHECK(shift == doctest::Approx(g * g * e2).epsilon(0.1));
  }
}

TEST_CASE("variational bound and truncation monotonicity") {
  const auto grid = axis_grid(3, 2, 2);
  const Vec3 P(0, 0, 0.7);
  const double g = 0.8;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n_max = 0; n_max <= 3; ++n_max) {
    const auto model = make_model(grid, n_max);
    const double e = ground_energy(*model, P, g);
    CHECK(e <= previous + 1e-12);
    CHECK(e <= 0.5 * P.squaredNorm() + 1e-12);
    previous = e;

    const auto H = model->hamiltonian(P, g);
    std::mt19937_64 rng(n_max + 11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 5; ++trial) {
      Vector psi(static_cast<Eigen::Index>(model->dimension()));
      for (auto& x : psi) x = normal(rng);
      psi.normalize();
      Vector Hpsi;
      H.apply(psi, Hpsi);
      CHECK(e <= psi.dot(Hpsi) + 1e-12);
    }
  }
  double prev_cut = std::numeric_limits<double>::infinity();
  for (double e_cut : {0.5, 1.0, 2.0}) {
    const double e = ground_energy(*make_model(grid, 3, {}, e_cut), P, g);
    CHECK(e <= prev_cut + 1e-12);
    prev_cut = e;
  }
}

TEST_CASE("field momentum is colinear with P on a symmetric grid") {
  const auto model = make_model(axis_grid(3, 3, 4), 2);
  for (double p : {0.4, 0.9, 1.4}) {
    const Vec3 P(0, 0, p);
    const auto gs = solve_ground_state(*model, P, 0.7);
    REQUIRE(gs.cluster_size == 1);
    const Vec3 pf = expect_field_momentum(*model, gs.vector());
    CHECK(std::hypot(pf.x(), pf.y()) < 1e-8);
  }
}

TEST_CASE("finite-difference derivatives agree with Feynman-Hellmann") {
  const auto model = make_model(axis_grid(), 2);
  ScanSpec spec;
  spec.p_min = 0.3;
  spec.p_max = 0.7;
  spec.steps = 3;
  spec.g = 0.5;
  const auto scan = mass_shell_scan(*model, spec);
  for (const auto& row : scan.rows) {
    REQUIRE(row.ok);
    // |FH - FD| <= max(10 h^2, 10 tol) with h = 1e-3.
    CHECK(std::abs(row.grad_fh - row.grad_fd) <= 1e-5);
    CHECK(row.vacuum_overlap < 1.0);
    CHECK(row.vacuum_overlap > 0.5);
    CHECK(row.curvature > 0.0);
  }
}

TEST_CASE("scan is deterministic across thread counts") {
  const auto model = make_model(axis_grid(), 2);
  ScanSpec spec;
  spec.p_min = 0.2;
  spec.p_max = 1.2;
  spec.steps = 6;
  spec.g = 0.6;
  spec.threads = 1;
  const auto serial = mass_shell_scan(*model, spec);
  spec.threads = 3;
  const auto parallel = mass_shell_scan(*model, spec);
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].energy == parallel.rows[i].energy);
    CHECK(serial.rows[i].grad_fh == parallel.rows[i].grad_fh);
    CHECK(serial.rows[i].shell_numbers == parallel.rows[i].shell_numbers);
  }
}

TEST_CASE("scan marks failed points and continues") {
  const auto model = make_model(axis_grid(), 2);
  ScanSpec spec;
  spec.p_min = 0.2;
  spec.p_max = 0.4;
  spec.steps = 2;
  spec.g = 0.6;
  SolverOptions opts;
  opts.method = SolverMethod::lanczos;
  opts.max_iterations = 3;
  opts.krylov_dim = 4;
  const auto scan = mass_shell_scan(*model, spec, opts);
  REQUIRE(scan.rows.size() == 2);
  for (const auto& row : scan.rows) {
    CHECK_FALSE(row.ok);
    CHECK_FALSE(row.error.empty());
  }
}

TEST_CASE("scan spec validation") {
  ScanSpec spec;
  spec.steps = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = {};
  spec.p_min = 0.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = {};
  spec.p_min = 1.0;
  spec.p_max = 0.5;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = {};
  spec.p_min = 0.005;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = {};
  spec.axis = Vec3::Zero();
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = {};
  spec.steps = 5;
  spec.p_min = 0.2;
  spec.p_max = 1.0;
  const auto p = spec.momenta();
  CHECK(p.front() == 0.2);
  CHECK(p.back() == 1.0);
  CHECK(p[2] == doctest::Approx(0.6));
}

TEST_CASE("vacuum overlap at zero coupling is a single unit weight") {
  const auto model = make_model(axis_grid(), 2);
  for (double p : {0.5, 1.5}) {
    const auto dist = vacuum_overlap_distribution(*model, Vec3(0, 0, p), 0.0);
    REQUIRE(dist.entries.size() == 1);
    CHECK(dist.entries[0].weight == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dist.entries[0].energy == doctest::Approx(0.5 * p * p).epsilon(1e-14));
    CHECK(dist.captured_weight == doctest::Approx(1.0));
    CHECK(dist.spread == doctest::Approx(0.0).scale(1.0));
    CHECK_FALSE(dist.warning);
  }
}

TEST_CASE("vacuum overlap concentrates below threshold and spreads above") {
  const auto model = make_model(axis_grid(6, 4, 2), 1);
  const double g = 0.2;
  const auto below = vacuum_overlap_distribution(*model, Vec3(0, 0, 0.5), g);
  CHECK(below.max_weight > 0.9);
  CHECK(below.captured_weight > 0.99);
  CHECK_FALSE(below.warning);
  const auto above = vacuum_overlap_distribution(*model, Vec3(0, 0, 1.5), g);
  CHECK(above.gamma_estimate > 0.0);
  CHECK(above.half_width == doctest::Approx(10.0 * above.gamma_estimate));
  CHECK(above.max_weight < below.max_weight);

  // Total weight over the whole spectrum is the vacuum norm.
  OverlapOptions wide;
  wide.half_width = 1e6;
  const auto all = vacuum_overlap_distribution(*model, Vec3(0, 0, 1.5), g, wide);
  CHECK(all.window_weight == doctest::Approx(1.0).epsilon(1e-12));
  // Variance of the full vacuum measure is g^2 sum vol rho^2.
  CHECK(all.variance == doctest::Approx(g * g * model->coupling().squaredNorm()).epsilon(1e-8));
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(model->grid().size()));
  const double n = window_weighted_number(*model, all, ones);
  CHECK(n >= 0.0);
  CHECK(n <= 1.0 + 1e-12);

  OverlapOptions bad;
  bad.half_width = -1.0;
  CHECK_THROWS_AS(vacuum_overlap_distribution(*model, Vec3(0, 0, 1.5), g, bad), InvalidArgument);
}
