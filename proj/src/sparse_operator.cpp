#include "cerenkov_fiber/sparse_operator.hpp"

#include "cerenkov_fiber/numeric_format.hpp"

#include <algorithm>
#include <cmath>

namespace fiber {

SparseHermitianOperator::SparseHermitianOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  matrix_.makeCompressed();
  if (matrix_.rows() != matrix_.cols()) throw InvalidArgument("operator: matrix must be square");
  if (max_asymmetry() != 0.0) throw InvalidArgument("operator: matrix is not exactly symmetric");
}

SparseHermitianOperator SparseHermitianOperator::from_diagonal(const Vector& diagonal) {
  const auto dim = static_cast<std::int64_t>(diagonal.size());
  SparseMatrix m(dim, dim);
  m.reserve(Eigen::VectorXi::Constant(static_cast<int>(dim), 1));
  for (std::int64_t i = 0; i < dim; ++i) m.insert(i, i) = diagonal[i];
  SparseHermitianOperator op;
  op.matrix_ = std::move(m);
  op.matrix_.makeCompressed();
  return op;
}

SparseHermitianOperator SparseHermitianOperator::from_half_triplets(
    std::int64_t dimension, const std::vector<Triplet>& half) {
  std::vector<Triplet> full;
  full.reserve(2 * half.size());
  for (const auto& t : half) {
    full.push_back(t);
    if (t.row() != t.col()) full.emplace_back(t.col(), t.row(), t.value());
  }
  SparseMatrix m(dimension, dimension);
  m.setFromTriplets(full.begin(), full.end());
  return SparseHermitianOperator(std::move(m));
}

Vector SparseHermitianOperator::diagonal() const { return matrix_.diagonal(); }

double SparseHermitianOperator::max_asymmetry() const {
  const SparseMatrix transposed = matrix_.transpose();
  double worst = 0.0;
  for (std::int64_t i = 0; i < matrix_.outerSize(); ++i) {
    SparseMatrix::InnerIterator a(matrix_, i);
    SparseMatrix::InnerIterator b(transposed, i);
    while (a || b) {
      if (a && b && a.col() == b.col()) {
        worst = std::max(worst, std::abs(a.value() - b.value()));
        ++a;
        ++b;
      } else if (a && (!b || a.col() < b.col())) {
        worst = std::max(worst, std::abs(a.value()));
        ++a;
      } else {
        worst = std::max(worst, std::abs(b.value()));
        ++b;
      }
    }
  }
  return worst;
}

void SparseHermitianOperator::write_triplets(std::ostream& out) const {
  for (std::int64_t i = 0; i < matrix_.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(matrix_, i); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

SparseHermitianOperator SparseHermitianOperator::plus(const SparseHermitianOperator& other,
                                                      double scale) const {
  SparseHermitianOperator out;
  out.matrix_ = matrix_ + scale * other.matrix_;
  out.matrix_.makeCompressed();
  return out;
}

}  // namespace fiber
