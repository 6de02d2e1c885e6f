#include "cerenkov_fiber/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace fiber {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

void fix_sign(Eigen::Ref<Vector> v) {
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best * (1.0 + 1e-12)) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

double residual_norm(const SparseHermitianOperator& H, const Vector& x, double theta) {
  return (H * x - theta * x).norm();
}

// Classical Gram-Schmidt against the columns of Q, applied twice.
void orthogonalize(Eigen::Ref<Vector> w, const Eigen::Ref<const MatrixXd>& Q) {
  if (Q.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vector h = Q.transpose() * w;
    w.noalias() -= Q * h;
  }
}

Vector random_unit(Index dim, std::mt19937_64& rng, const Eigen::Ref<const MatrixXd>& locked,
                   const Eigen::Ref<const MatrixXd>& basis) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = normal(rng);
    orthogonalize(v, locked);
    orthogonalize(v, basis);
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
  throw SolverError("lanczos: could not draw a start vector in the complement", {});
}

struct RunResult {
  std::vector<double> values;
  MatrixXd vectors;
  std::vector<double> residuals;
};

// Thick-restart Lanczos for the `nev` lowest eigenpairs of H restricted to the
// orthogonal complement of `locked`.
RunResult thick_restart_run(const SparseHermitianOperator& H, const MatrixXd& locked,
                            std::size_t nev, const SolverOptions& opt, std::mt19937_64& rng,
                            std::size_t& matvecs, std::size_t& restarts) {
  const Index dim = H.dimension();
  const Index complement = dim - locked.cols();
  const Index want = static_cast<Index>(nev);
  Index m = std::max<Index>(static_cast<Index>(opt.krylov_dim), 2 * want + 10);
  m = std::min(m, complement);
  const Index keep_max = std::max<Index>(want, std::min<Index>(m - 2, want + (m - want) / 2));

  MatrixXd V(dim, m + 1);
  MatrixXd T = MatrixXd::Zero(m, m);
  V.col(0) = random_unit(dim, rng, locked, V.leftCols(0));
  Index k = 0;
  double beta = 0.0;
  std::vector<double> best_res(static_cast<std::size_t>(want), INFINITY);

  while (true) {
    for (Index j = k; j < m; ++j) {
      Vector w = H * V.col(j);
      ++matvecs;
      const Vector h = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h;
      const Vector h2 = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h2;
      orthogonalize(w, locked);
      const Vector col = h + h2;
      for (Index i = 0; i <= j; ++i) {
        T(i, j) = col[i];
        T(j, i) = col[i];
      }
      beta = w.norm();
      const double scale = std::max(1.0, std::abs(T(j, j)));
      if (beta <= 1e-13 * scale) {
        // Invariant subspace: continue from a fresh direction with zero coupling.
        beta = 0.0;
        if (j + 1 < complement) {
          V.col(j + 1) = random_unit(dim, rng, locked, V.leftCols(j + 1));
        } else {
          V.col(j + 1).setZero();
        }
      } else {
        V.col(j + 1) = w / beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    const Vector& theta = es.eigenvalues();
    const MatrixXd& S = es.eigenvectors();

    bool converged = true;
    for (Index i = 0; i < want; ++i) {
      const double est = beta * std::abs(S(m - 1, i));
      best_res[static_cast<std::size_t>(i)] = std::min(best_res[static_cast<std::size_t>(i)], est);
      if (est > 0.5 * opt.tolerance) converged = false;
    }
    if (converged) {
      RunResult out;
      out.vectors = V.leftCols(m) * S.leftCols(want);
      for (Index i = 0; i < want; ++i) {
        out.values.push_back(theta[i]);
        out.residuals.push_back(residual_norm(H, out.vectors.col(i), theta[i]));
      }
      const bool verified = std::all_of(out.residuals.begin(), out.residuals.end(),
                                        [&](double r) { return r <= opt.tolerance; });
      if (verified) return out;
    }
    if (matvecs >= opt.max_iterations) {
      std::ostringstream msg;
      msg << "lanczos: no convergence to " << opt.tolerance << " within " << opt.max_iterations
          << " operator applications";
      throw SolverError(msg.str(), best_res);
    }

    // Thick restart: keep the lowest Ritz vectors and the current residual direction.
    ++restarts;
    k = keep_max;
    const MatrixXd kept = V.leftCols(m) * S.leftCols(k);
    const Vector next = V.col(m);
    V.leftCols(k) = kept;
    V.col(k) = next;
    T.setZero();
    for (Index i = 0; i < k; ++i) T(i, i) = theta[i];
  }
}

SpectralResult finish(std::vector<double> values, MatrixXd vectors, const SparseHermitianOperator& H,
                      std::size_t count) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SpectralResult res;
  res.eigenvectors.resize(H.dimension(), static_cast<Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    res.eigenvalues.push_back(values[order[i]]);
    Vector v = vectors.col(static_cast<Index>(order[i]));
    v.normalize();
    fix_sign(v);
    res.residuals.push_back(residual_norm(H, v, res.eigenvalues.back()));
    res.eigenvectors.col(static_cast<Index>(i)) = v;
  }
  return res;
}

}  // namespace

std::size_t SpectralResult::ground_cluster_size(double tolerance) const {
  if (eigenvalues.empty()) return 0;
  std::size_t n = 1;
  while (n < eigenvalues.size() && eigenvalues[n] - eigenvalues[0] <= tolerance) ++n;
  return n;
}

SpectralResult dense_eigenpairs(const SparseHermitianOperator& H, std::size_t count) {
  const Index dim = H.dimension();
  if (count == 0 || static_cast<Index>(count) > dim) {
    throw InvalidArgument("eigensolver: requested pair count must lie in [1, dimension]");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(H.to_dense());
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", {});
  std::vector<double> values(es.eigenvalues().data(), es.eigenvalues().data() + dim);
  SpectralResult res = finish(std::move(values), es.eigenvectors(), H, count);
  res.method = "dense";
  return res;
}

namespace {
SpectralResult lanczos_eigenpairs(const SparseHermitianOperator& H, std::size_t count,
                                  const SolverOptions& options);
}  // namespace

SpectralResult lowest_eigenpairs(const SparseHermitianOperator& H, std::size_t count,
                                 const SolverOptions& options) {
  const Index dim = H.dimension();
  if (count == 0 || static_cast<Index>(count) > dim) {
    throw InvalidArgument("eigensolver: requested pair count must lie in [1, dimension]");
  }
  if (!(options.tolerance > 0.0)) throw InvalidArgument("eigensolver: tolerance must be positive");
  const bool dense = options.method == SolverMethod::dense ||
                     (options.method == SolverMethod::automatic &&
                      static_cast<std::size_t>(dim) <= 2 * options.krylov_dim) ||
                     static_cast<Index>(count) >= dim - 2;
  if (dense) return dense_eigenpairs(H, count);
  if (options.method == SolverMethod::automatic &&
      static_cast<std::size_t>(dim) <= options.dense_threshold) {
    try {
      return lanczos_eigenpairs(H, count, options);
    } catch (const SolverError&) {
      return dense_eigenpairs(H, count);
    }
  }
  return lanczos_eigenpairs(H, count, options);
}

namespace {

SpectralResult lanczos_eigenpairs(const SparseHermitianOperator& H, std::size_t count,
                                  const SolverOptions& options) {
  const Index dim = H.dimension();

  std::mt19937_64 rng(options.seed);
  std::size_t matvecs = 0;
  std::size_t restarts = 0;
  std::vector<double> values;
  MatrixXd locked(dim, 0);
  constexpr std::size_t kBuffer = 2;

  auto lock = [&](const RunResult& run, std::size_t i) {
    values.push_back(run.values[i]);
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    Vector v = run.vectors.col(static_cast<Index>(i));
    orthogonalize(v, locked.leftCols(locked.cols() - 1));
    locked.col(locked.cols() - 1) = v.normalized();
  };

  while (true) {
    const std::size_t complement = static_cast<std::size_t>(dim - locked.cols());
    if (complement == 0) break;
    const std::size_t missing = values.size() >= count ? 1 : count - values.size();
    const std::size_t nev = std::min(missing + kBuffer, complement);
    RunResult run = thick_restart_run(H, locked, nev, options, rng, matvecs, restarts);

    if (values.size() < count) {
      for (std::size_t i = 0; i < run.values.size(); ++i) lock(run, i);
      continue;
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = sorted[count - 1];
    const double slack = options.tolerance;
    std::size_t added = 0;
    for (std::size_t i = 0; i < run.values.size(); ++i) {
      if (run.values[i] < threshold - slack) {
        lock(run, i);
        ++added;
      }
    }
    if (added == 0) break;
  }

  SpectralResult res = finish(values, locked, H, count);
  res.matvecs = matvecs;
  res.restarts = restarts;
  res.method = "lanczos";
  for (double r : res.residuals) {
    if (r > options.tolerance) {
      throw SolverError("lanczos: locked pair lost accuracy", res.residuals);
    }
  }
  return res;
}

}  // namespace

KrylovSpectralMeasure krylov_spectral_measure(const SparseHermitianOperator& H, const Vector& start,
                                              std::size_t max_steps, bool keep_basis) {
  const Index dim = H.dimension();
  if (start.size() != dim) throw InvalidArgument("krylov: start vector has wrong dimension");
  const double norm0 = start.norm();
  if (!(norm0 > 0.0)) throw InvalidArgument("krylov: start vector is zero");
  const Index m_max = std::min<Index>(static_cast<Index>(std::max<std::size_t>(max_steps, 1)), dim);

  MatrixXd V(dim, m_max);
  MatrixXd T = MatrixXd::Zero(m_max, m_max);
  V.col(0) = start / norm0;
  double beta = 0.0;
  Index m = 0;
  bool exhausted = false;
  for (Index j = 0; j < m_max; ++j) {
    Vector w = H * V.col(j);
    const Vector h = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h;
    const Vector h2 = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h2;
    const Vector col = h + h2;
    for (Index i = 0; i <= j; ++i) {
      T(i, j) = col[i];
      T(j, i) = col[i];
    }
    m = j + 1;
    beta = w.norm();
    if (beta <= 1e-12 * std::max(1.0, std::abs(T(j, j)))) {
      exhausted = true;
      beta = 0.0;
      break;
    }
    if (j + 1 < m_max) V.col(j + 1) = w / beta;
  }

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T.topLeftCorner(m, m));
  KrylovSpectralMeasure out;
  out.steps = static_cast<std::size_t>(m);
  out.exhausted = exhausted;
  for (Index i = 0; i < m; ++i) {
    const double s0 = es.eigenvectors()(0, i);
    out.ritz_values.push_back(es.eigenvalues()[i]);
    out.weights.push_back(s0 * s0);
    out.residuals.push_back(beta * std::abs(es.eigenvectors()(m - 1, i)));
  }
  if (keep_basis) {
    out.basis = V.leftCols(m);
    out.ritz_coefficients = es.eigenvectors();
  }
  return out;
}

}  // namespace fiber
