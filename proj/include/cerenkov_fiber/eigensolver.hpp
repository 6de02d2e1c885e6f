#pragma once

#include "cerenkov_fiber/sparse_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fiber {

enum class SolverMethod { automatic, dense, lanczos };

struct SolverOptions {
  /// Required residual norm ||H x - E x|| for every returned pair.
  double tolerance = 1e-9;
  /// Budget of operator applications for the iterative solver.
  std::size_t max_iterations = 50000;
  /// Krylov subspace size before a thick restart.
  std::size_t krylov_dim = 60;
  SolverMethod method = SolverMethod::automatic;
  /// automatic diagonalizes densely up to 2 * krylov_dim, and falls back to the
  /// dense solver when Lanczos fails on dimensions up to this one.
  std::size_t dense_threshold = 2000;
  std::uint64_t seed = 0x5eed;
};

/// Eigenpairs in ascending order of eigenvalue.
struct SpectralResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;  // one unit column per eigenvalue
  std::vector<double> residuals;
  std::size_t matvecs = 0;
  std::size_t restarts = 0;
  std::string method;

  std::size_t size() const { return eigenvalues.size(); }
  Vector vector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i)); }
  /// Number of leading eigenvalues within `tolerance` of the lowest one.
  std::size_t ground_cluster_size(double tolerance) const;
};

/// The `count` algebraically smallest eigenpairs of H.
///
/// The iterative path is a thick-restart Lanczos with full
/// reorthogonalization. Converged pairs are locked and the search continues in
/// their orthogonal complement from a fresh start vector until no lower
/// eigenvalue is found there, which recovers every copy of a degenerate level.
/// Eigenvector signs are fixed so the largest-magnitude component is positive.
///
/// Throws SolverError (carrying the best residuals) when the iteration budget
/// runs out.
SpectralResult lowest_eigenpairs(const SparseHermitianOperator& H, std::size_t count,
                                 const SolverOptions& options = {});

/// Full dense diagonalization, lowest `count` pairs.
SpectralResult dense_eigenpairs(const SparseHermitianOperator& H, std::size_t count);

/// Krylov decomposition of H started from a fixed unit vector, without restarts.
///
/// Ritz weights |<ritz_j, start>|^2 form the discrete spectral measure of the
/// start vector; converged Ritz pairs are eigenpairs of H.
struct KrylovSpectralMeasure {
  std::vector<double> ritz_values;
  std::vector<double> weights;
  std::vector<double> residuals;  // ||H y_j - theta_j y_j||
  bool exhausted = false;         // Krylov space became invariant
  std::size_t steps = 0;
  Eigen::MatrixXd basis;          // Lanczos vectors, dim x steps
  Eigen::MatrixXd ritz_coefficients;  // steps x steps

  Vector ritz_vector(std::size_t j) const {
    return basis * ritz_coefficients.col(static_cast<Eigen::Index>(j));
  }
};

KrylovSpectralMeasure krylov_spectral_measure(const SparseHermitianOperator& H, const Vector& start,
                                              std::size_t max_steps, bool keep_basis = true);

}  // namespace fiber
