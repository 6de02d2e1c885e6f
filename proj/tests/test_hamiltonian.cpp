#include "cerenkov_fiber/eigensolver.hpp"
#include "cerenkov_fiber/hamiltonian.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <sstream>

using namespace fiber;

namespace {

std::shared_ptr<const MomentumGrid> single_mode(const Vec3& k, double vol) {
  Mode m;
  m.k = k;
  m.vol = vol;
  return std::make_shared<const MomentumGrid>(MomentumGrid::from_modes({m}));
}

std::shared_ptr<const MomentumGrid> modes(const std::vector<Vec3>& ks, double vol) {
  std::vector<Mode> ms;
  for (const auto& k : ks) {
    Mode m;
    m.k = k;
    m.vol = vol;
    ms.push_back(m);
  }
  return std::make_shared<const MomentumGrid>(MomentumGrid::from_modes(ms));
}

Eigen::VectorXd spectrum(const SparseHermitianOperator& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("form factor values") {
  const FormFactor ff;  // c = 1, beta = 1, cutoff = 1, w = 0.2
  CHECK(ff.value(0.5) == doctest::Approx(0.5));
  CHECK(eval_form_factor(ff, 1.0) == 0.0);
  CHECK(ff.value(1.5) == 0.0);
  CHECK(ff.value(0.8) == doctest::Approx(0.8));
  CHECK(ff.value(0.9) < 0.9);
  CHECK(ff.value(0.9) > 0.0);
}

TEST_CASE("form factor derivative matches central differences") {
  for (double beta : {0.5, 1.0, 2.0}) {
    FormFactor ff;
    ff.beta = beta;
    for (double r : {0.05, 0.3, 0.79, 0.81, 0.9, 0.97}) {
      const double fd = oracle::central_difference([&](double x) { return ff.value(x); }, r, 1e-5);
      CHECK(eval_form_factor_derivative(ff, r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("form factor is C1 across both seams and bounded by the power law") {
  FormFactor ff;
  ff.beta = 1.5;
  ff.amplitude = 2.0;
  for (double seam : {ff.plateau_end(), ff.cutoff}) {
    const double h = 1e-9;
    CHECK(ff.value(seam - h) == doctest::Approx(ff.value(std::min(seam + h, 10.0))).epsilon(1e-6).scale(1.0));
    CHECK(ff.derivative(seam - h) == doctest::Approx(ff.derivative(seam + h)).epsilon(1e-6).scale(1.0));
  }
  double worst_ratio = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double r = i * 5e-4;
    CHECK(std::abs(ff.value(r)) <= ff.amplitude * std::pow(r, ff.beta) * (1.0 + 1e-15));
    worst_ratio = std::max(worst_ratio, std::abs(ff.derivative(r)) / std::pow(r, ff.beta - 1.0));
  }
  CHECK(worst_ratio < 50.0);
}

TEST_CASE("form factor validation") {
  FormFactor ff;
  ff.smooth_width = 1.0;
  CHECK_THROWS_AS(ff.validate(), InvalidArgument);
  ff = FormFactor{};
  ff.cutoff = 0.0;
  CHECK_THROWS_AS(ff.validate(), InvalidArgument);
  ff = FormFactor{};
  ff.amplitude = -1.0;
  CHECK_THROWS_AS(ff.validate(), InvalidArgument);
}

TEST_CASE("free fiber diagonal") {
  const FormFactor ff;
  {
    const auto basis = build_basis(single_mode(Vec3(1, 0, 0), 0.1), 2);
    const FiberParams p{Vec3(0.5, 0, 0), 0.0, basis, ff};
    CHECK(build_free_fiber(p).diagonal()[0] == doctest::Approx(0.125));
  }
  {
    const auto basis = build_basis(single_mode(Vec3(1, 0, 0), 0.1), 2);
    const FiberParams p{Vec3(1.5, 0, 0), 0.0, basis, ff};
    const Vector d = free_fiber_diagonal(p);
    CHECK(d[static_cast<Eigen::Index>(*basis.one_boson_index(0))] == doctest::Approx(1.125));
  }
  {
    const auto basis = build_basis(single_mode(Vec3(0.5, 0, 0), 0.1), 2);
    const FiberParams p{Vec3(2, 0, 0), 0.0, basis, ff};
    const auto two = basis.index_of(Occupation{{0, 2}});
    CHECK(free_fiber_diagonal(p)[static_cast<Eigen::Index>(two)] == doctest::Approx(1.5));
  }
}

TEST_CASE("interaction matrix elements") {
  const FormFactor ff;
  const double v = 0.3;
  const auto basis = build_basis(single_mode(Vec3(0.4, 0, 0), v), 3);
  const auto phi = build_interaction(basis, ff);
  const auto one = static_cast<Eigen::Index>(*basis.one_boson_index(0));
  const Eigen::MatrixXd D = phi.to_dense();
  CHECK(D(0, one) == doctest::Approx(std::sqrt(v) * ff.value(0.4)));
  CHECK(D(one, 0) == D(0, one));
  // <2|phi|1> carries sqrt(2).
  const auto two = static_cast<Eigen::Index>(basis.index_of(Occupation{{0, 2}}));
  CHECK(D(two, one) == doctest::Approx(std::sqrt(2.0 * v) * ff.value(0.4)));
  Vector omega = Vector::Zero(D.rows());
  omega[0] = 1.0;
  CHECK(phi.expectation(omega) == 0.0);
}

TEST_CASE("modes at or beyond the cutoff do not couple") {
  const FormFactor ff;
  const auto basis = build_basis(modes({{0.3, 0, 0}, {0, 1.0, 0}, {0, 0, 1.4}}, 0.1), 2);
  const Eigen::MatrixXd D = build_interaction(basis, ff).to_dense();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool touches_uv = false;
    for (const auto& mc : basis.state(i)) touches_uv = touches_uv || mc.mode > 0;
    if (!touches_uv) continue;
    // Rows of states holding a UV boson only connect through the coupled mode 0.
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double value = D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (value == 0.0) continue;
      Occupation a(basis.state(i).begin(), basis.state(i).end());
      Occupation b(basis.state(j).begin(), basis.state(j).end());
      auto count = [](const Occupation& o, std::uint32_t m) {
        for (const auto& mc : o) {
          if (mc.mode == m) return mc.count;
        }
        return 0u;
      };
      CHECK(count(a, 1) == count(b, 1));
      CHECK(count(a, 2) == count(b, 2));
    }
  }
  const auto single_uv = build_basis(modes({{0, 0, 1.0}}, 0.1), 2);
  CHECK(build_interaction(single_uv, ff).to_dense().norm() == 0.0);
}

TEST_CASE("hamiltonian reduces to the free fiber at g = 0") {
  const FormFactor ff;
  auto grid = std::make_shared<const MomentumGrid>(build_grid({0.1, 1.0, 3}, {2, 2}));
  const auto basis = build_basis(grid, 2);
  const FiberParams p{Vec3(0.3, 0.1, 0.7), 0.0, basis, ff};
  CHECK((build_fiber_hamiltonian(p).to_dense() - build_free_fiber(p).to_dense()).norm() == 0.0);
}

TEST_CASE("resonant single-mode 2x2 model") {
  const FormFactor ff;
  const double v = 0.2;
  const double g = 0.07;
  const auto basis = build_basis(single_mode(Vec3(1, 0, 0), v), 1);
  const FiberParams p{Vec3(1.5, 0, 0), g, basis, ff};
  const Eigen::MatrixXd H = build_fiber_hamiltonian(p).to_dense();
  REQUIRE(H.rows() == 2);
  const double off = g * std::sqrt(v) * ff.value(1.0);
  CHECK(H(0, 0) == doctest::Approx(1.125));
  CHECK(H(1, 1) == doctest::Approx(1.125));
  CHECK(H(0, 1) == doctest::Approx(off));
  // Form factor vanishes at the cutoff, so take |k0| = 0.5 for a nonzero coupling.
  const auto basis2 = build_basis(single_mode(Vec3(0.5, 0, 0), v), 1);
  const FiberParams p2{Vec3(1.5, 0, 0), g, basis2, ff};
  const auto ev = spectrum(build_fiber_hamiltonian(p2));
  const double a = 1.125;
  const double b = 0.5 + 0.5;
  const double c = g * std::sqrt(v) * ff.value(0.5);
  const double mean = 0.5 * (a + b);
  const double half = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
  CHECK(ev[0] == doctest::Approx(mean - half).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(mean + half).epsilon(1e-14));
}

TEST_CASE("assembled operators are exactly symmetric with one-boson sector links") {
  const FormFactor ff;
  auto grid = std::make_shared<const MomentumGrid>(build_grid({0.1, 1.0, 4}, {3, 2}));
  const auto basis = build_basis(grid, 3);
  const FiberParams p{Vec3(0.2, -0.4, 0.9), 0.3, basis, ff};
  const auto H = build_fiber_hamiltonian(p);
  CHECK(H.max_asymmetry() == 0.0);
  const Eigen::MatrixXd D = H.to_dense();
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      if (D(i, j) == 0.0) continue;
      const long dn = static_cast<long>(basis.total_number(static_cast<std::size_t>(i))) -
                      static_cast<long>(basis.total_number(static_cast<std::size_t>(j)));
      CHECK(std::abs(dn) <= 1);
    }
  }
  SparseMatrix bad(2, 2);
  bad.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(SparseHermitianOperator{bad}, InvalidArgument);
}

TEST_CASE("field momentum, field energy and weighted number operators") {
  const auto basis = build_basis(modes({{0, 0, 1.0}, {0.5, 0, 0}}, 0.1), 2);
  const auto pf = build_field_momentum(basis);
  const Vector hf = build_field_energy(basis).diagonal();
  const Vector n1 = build_number_weighted(basis, Vector::Ones(2)).diagonal();
  CHECK(pf[0].diagonal()[0] == 0.0);
  CHECK(hf[0] == 0.0);
  CHECK(n1[0] == 0.0);
  const auto z = static_cast<Eigen::Index>(*basis.one_boson_index(0));
  CHECK(pf[2].diagonal()[z] == doctest::Approx(1.0));
  CHECK(hf[z] == doctest::Approx(1.0));
  CHECK(n1[z] == doctest::Approx(1.0));
  const auto mixed = static_cast<Eigen::Index>(basis.index_of(Occupation{{0, 1}, {1, 1}}));
  CHECK(pf[0].diagonal()[mixed] == doctest::Approx(0.5));
  CHECK(pf[2].diagonal()[mixed] == doctest::Approx(1.0));
  CHECK(hf[mixed] == doctest::Approx(1.5));
  Vector w(2);
  w << 0.25, 3.0;
  CHECK(number_weighted_diagonal(basis, w)[mixed] == doctest::Approx(3.25));
  CHECK_THROWS_AS(number_weighted_diagonal(basis, Vector::Ones(3)), InvalidArgument);
}

TEST_CASE("cached model reproduces the direct assembly") {
  const FormFactor ff;
  auto grid = std::make_shared<const MomentumGrid>(build_grid({0.1, 1.0, 3}, {2, 3}));
  auto basis = std::make_shared<const FockBasis>(build_basis(grid, 2));
  const FiberModel model(basis, ff);
  const Vec3 P(0.1, 0.2, 0.6);
  const FiberParams p{P, 0.4, *basis, ff};
  CHECK((model.hamiltonian(P, 0.4).to_dense() - build_fiber_hamiltonian(p).to_dense()).norm() == 0.0);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Vec3 K(model.field_momentum()[0][i], model.field_momentum()[1][i], model.field_momentum()[2][i]);
    CHECK(model.field_momentum_sq()[static_cast<Eigen::Index>(i)] == doctest::Approx(K.squaredNorm()));
  }
}

TEST_CASE("spectrum is covariant under rotations of grid and momentum") {
  const FormFactor ff;
  auto grid = std::make_shared<const MomentumGrid>(build_grid({0.1, 1.0, 3}, {2, 4}));
  const auto basis = build_basis(grid, 2);
  const Vec3 P(0.3, 0.0, 0.8);
  const double g = 0.5;
  const auto reference = spectrum(build_fiber_hamiltonian({P, g, basis, ff}));

  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<Mode> rotated = grid->modes();
  for (auto& m : rotated) m.k = R * m.k;
  const auto rbasis = build_basis(std::make_shared<const MomentumGrid>(MomentumGrid::from_modes(rotated)), 2);
  const auto turned = spectrum(build_fiber_hamiltonian({R * P, g, rbasis, ff}));
  CHECK((reference - turned).cwiseAbs().maxCoeff() < 1e-12);

  // With P on the axis, an azimuthal step maps the grid onto itself.
  const Vec3 Pz(0, 0, 0.8);
  const auto on_axis = spectrum(build_fiber_hamiltonian({Pz, g, basis, ff}));
  const Eigen::Matrix3d Rz = Eigen::AngleAxisd(kPi / 2.0, Vec3::UnitZ()).toRotationMatrix();
  std::vector<Mode> relabeled = grid->modes();
  for (auto& m : relabeled) m.k = Rz * m.k;
  const auto zbasis = build_basis(std::make_shared<const MomentumGrid>(MomentumGrid::from_modes(relabeled)), 2);
  const auto shifted = spectrum(build_fiber_hamiltonian({Pz, g, zbasis, ff}));
  CHECK((on_axis - shifted).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("triplet dump lists every stored entry") {
  const FormFactor ff;
  const auto basis = build_basis(single_mode(Vec3(0.5, 0, 0), 0.2), 1);
  const auto H = build_fiber_hamiltonian({Vec3(1.5, 0, 0), 0.1, basis, ff});
  std::ostringstream out;
  H.write_triplets(out);
  std::istringstream in(out.str());
  std::size_t rows = 0;
  long r = 0, c = 0;
  double v = 0.0;
  while (in >> r >> c >> v) {
    CHECK(H.to_dense()(r, c) == v);
    ++rows;
  }
  CHECK(rows == static_cast<std::size_t>(H.nonzeros()));
}
