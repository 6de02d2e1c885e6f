#pragma once

#include "cerenkov_fiber/basis.hpp"
#include "cerenkov_fiber/common.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace fiber {

/// Real symmetric operator on a truncated basis, row-compressed.
///
/// Entries are inserted in mirrored pairs so the stored matrix equals its
/// transpose bit for bit; construction verifies this.
class SparseHermitianOperator {
 public:
  using Triplet = Eigen::Triplet<double, std::int64_t>;

  SparseHermitianOperator() = default;
  /// Takes an assembled matrix; throws InvalidArgument if it is not exactly symmetric.
  explicit SparseHermitianOperator(SparseMatrix matrix);

  static SparseHermitianOperator from_diagonal(const Vector& diagonal);
  /// Builds from upper-or-lower entries: each off-diagonal (i,j,v) is stored
  /// at both (i,j) and (j,i); diagonal entries once.
  static SparseHermitianOperator from_half_triplets(std::int64_t dimension,
                                                    const std::vector<Triplet>& half);

  std::int64_t dimension() const { return matrix_.rows(); }
  std::int64_t nonzeros() const { return matrix_.nonZeros(); }
  const SparseMatrix& matrix() const { return matrix_; }
  bool is_symmetric() const { return symmetric_; }
  Vector diagonal() const;

  void apply(const Vector& x, Vector& y) const { y.noalias() = matrix_ * x; }
  Vector operator*(const Vector& x) const { return matrix_ * x; }
  double expectation(const Vector& x) const { return x.dot(matrix_ * x); }

  /// max |A - A^T| over stored entries.
  double max_asymmetry() const;

  /// Dense copy, intended for small dimensions.
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }

  /// Text triplets "row col value", one per line, in row-major order.
  void write_triplets(std::ostream& out) const;

  /// this + scale * other, entrywise symmetric by construction.
  SparseHermitianOperator plus(const SparseHermitianOperator& other, double scale) const;

 private:
  SparseMatrix matrix_;
  bool symmetric_ = true;
};

}  // namespace fiber
