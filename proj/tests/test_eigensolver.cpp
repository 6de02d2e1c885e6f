#include "cerenkov_fiber/eigensolver.hpp"
#include "cerenkov_fiber/hamiltonian.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <random>

using namespace fiber;

namespace {

SparseHermitianOperator random_symmetric(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<SparseHermitianOperator::Triplet> half;
  for (std::size_t i = 0; i < n; ++i) {
    half.emplace_back(i, i, 4.0 * u(rng));
    for (std::size_t j = 0; j < i; ++j) {
      if (keep(rng)) half.emplace_back(i, j, u(rng));
    }
  }
  return SparseHermitianOperator::from_half_triplets(static_cast<std::int64_t>(n), half);
}

Eigen::VectorXd dense_values(const SparseHermitianOperator& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SolverOptions lanczos_options(double tol = 1e-10) {
  SolverOptions o;
  o.method = SolverMethod::lanczos;
  o.tolerance = tol;
  return o;
}

}  // namespace

TEST_CASE("diagonal matrix") {
  Vector d(3);
  d << 3, 1, 2;
  const auto H = SparseHermitianOperator::from_diagonal(d);
  const auto r = lowest_eigenpairs(H, 1);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(std::abs(r.vector(0)[1]) == doctest::Approx(1.0));
  CHECK(r.vector(0)[1] > 0.0);
}

TEST_CASE("resonant 2x2 model matches the closed form") {
  Mode m;
  m.k = Vec3(1, 0, 0);
  m.vol = 0.3;
  const FormFactor ff{1.0, 1.0, 2.0, 0.2};  // cutoff 2 so rho(1) = 1
  auto basis = build_basis(std::make_shared<const MomentumGrid>(MomentumGrid::from_modes({m})), 1);
  const double g = 0.05;
  const auto H = build_fiber_hamiltonian({Vec3(1.5, 0, 0), g, basis, ff});
  const auto r = lowest_eigenpairs(H, 2);
  const double split = g * std::sqrt(m.vol) * ff.value(1.0);
  CHECK(std::abs(r.eigenvalues[0] - (1.125 - split)) <= 1e-12);
  CHECK(std::abs(r.eigenvalues[1] - (1.125 + split)) <= 1e-12);
}

TEST_CASE("lanczos agrees with dense diagonalization on a random 200-dim matrix") {
  const auto H = random_symmetric(200, 0.05, 7);
  const auto ref = dense_values(H);
  const auto r = lowest_eigenpairs(H, 6, lanczos_options());
  CHECK(r.method == "lanczos");
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(std::abs(r.eigenvalues[i] - ref[static_cast<Eigen::Index>(i)]) <= 1e-9);
    CHECK(r.residuals[i] <= 1e-10);
  }
  const Eigen::MatrixXd gram = r.eigenvectors.transpose() * r.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("locking recovers every copy of a degenerate level") {
  // Block-diagonal: three identical blocks give triply degenerate levels.
  const auto block = random_symmetric(60, 0.2, 11).to_dense();
  std::vector<SparseHermitianOperator::Triplet> half;
  for (int b = 0; b < 3; ++b) {
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j <= i; ++j) {
        if (block(i, j) != 0.0) half.emplace_back(60 * b + i, 60 * b + j, block(i, j));
      }
    }
  }
  const auto H = SparseHermitianOperator::from_half_triplets(180, half);
  const auto ref = dense_values(H);
  const auto r = lowest_eigenpairs(H, 5, lanczos_options());
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::abs(r.eigenvalues[i] - ref[static_cast<Eigen::Index>(i)]) <= 1e-9);
  }
  CHECK(r.ground_cluster_size(1e-8) == 3);
}

TEST_CASE("dense path for small problems and pair-count validation") {
  const auto H = random_symmetric(30, 0.3, 3);
  const auto r = lowest_eigenpairs(H, 4);
  CHECK(r.method == "dense");
  const auto ref = dense_values(H);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  CHECK_THROWS_AS(lowest_eigenpairs(H, 0), InvalidArgument);
  CHECK_THROWS_AS(lowest_eigenpairs(H, 31), InvalidArgument);
  SolverOptions bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(lowest_eigenpairs(H, 1, bad), InvalidArgument);
}

TEST_CASE("iteration budget exhaustion carries the best residuals") {
  const auto H = random_symmetric(400, 0.02, 5);
  SolverOptions o = lanczos_options(1e-14);
  o.max_iterations = 30;
  o.krylov_dim = 20;
  try {
    lowest_eigenpairs(H, 3, o);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::solver);
    REQUIRE_FALSE(e.best_residuals.empty());
    CHECK(e.best_residuals[0] > 0.0);
  }
}

TEST_CASE("solver output is deterministic") {
  const auto H = random_symmetric(300, 0.03, 9);
  const auto a = lowest_eigenpairs(H, 3, lanczos_options());
  const auto b = lowest_eigenpairs(H, 3, lanczos_options());
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
}

TEST_CASE("krylov spectral measure of a start vector") {
  const auto H = random_symmetric(80, 0.1, 21);
  Vector start = Vector::Zero(80);
  start[0] = 1.0;
  const auto km = krylov_spectral_measure(H, start, 200);
  CHECK(km.exhausted);
  double total = 0.0;
  for (double w : km.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Dense reference: weights |<v_j, e_0>|^2 summed per eigenvalue.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense());
  for (std::size_t j = 0; j < km.ritz_values.size(); ++j) {
    if (km.residuals[j] > 1e-8) continue;
    double w = 0.0;
    for (Eigen::Index i = 0; i < 80; ++i) {
      if (std::abs(es.eigenvalues()[i] - km.ritz_values[j]) < 1e-7) w += es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    CHECK(km.weights[j] == doctest::Approx(w).epsilon(1e-6));
    const Vector y = km.ritz_vector(j);
    CHECK((H * y - km.ritz_values[j] * y).norm() <= 1e-7);
  }
  const auto partial = krylov_spectral_measure(H, start, 10, false);
  CHECK(partial.steps == 10);
  CHECK_FALSE(partial.exhausted);
  CHECK(partial.basis.size() == 0);
}
