#pragma once

#include "cerenkov_fiber/grid.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fiber {

/// Occupation of a single mode; counts are always >= 1 inside a basis state.
struct ModeCount {
  std::uint32_t mode = 0;
  std::uint32_t count = 0;
  friend bool operator==(const ModeCount&, const ModeCount&) = default;
};

using Occupation = std::vector<ModeCount>;

/// Link from a state to the state with one boson removed from `mode`.
/// `amplitude` is sqrt(n_mode) of the source state.
struct Lowering {
  std::uint32_t mode = 0;
  std::uint32_t target = 0;
  double amplitude = 0.0;
};

inline constexpr std::size_t kDefaultBasisBudget = 250000;

/// Truncated bosonic Fock basis over the modes of a MomentumGrid.
///
/// States are ordered by total boson number, then lexicographically by the
/// nondecreasing list of occupied mode indices (a two-boson state in modes
/// {0,0} precedes {0,1}, which precedes {1,1}). The vacuum has ordinal 0.
/// Immutable after construction.
class FockBasis {
 public:
  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t n_max() const { return n_max_; }
  const std::optional<double>& e_cut() const { return e_cut_; }
  const MomentumGrid& grid() const { return *grid_; }
  const std::shared_ptr<const MomentumGrid>& grid_ptr() const { return grid_; }

  std::span<const ModeCount> state(std::size_t i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  std::uint32_t total_number(std::size_t i) const { return numbers_[i]; }
  std::span<const Lowering> lowerings(std::size_t i) const {
    return {lowerings_.data() + offsets_[i], lowerings_.data() + offsets_[i + 1]};
  }

  /// Ordinal of an occupation (any order, zero counts ignored), if admissible.
  std::optional<std::size_t> find(std::span<const ModeCount> occupation) const;
  /// Like find() but throws LookupError for inadmissible occupations.
  std::size_t index_of(std::span<const ModeCount> occupation) const;

  /// Ordinal of the one-boson state in mode m, if present.
  std::optional<std::size_t> one_boson_index(std::size_t m) const;

  /// Free one-boson-energy sum  sum_m n_m |k_m|  of state i.
  double free_field_energy(std::size_t i) const;

 private:
  friend FockBasis build_basis(std::shared_ptr<const MomentumGrid>, std::size_t,
                               std::optional<double>, std::size_t);
  FockBasis() = default;
  static std::string key_of(std::span<const ModeCount> canonical);

  std::shared_ptr<const MomentumGrid> grid_;
  std::size_t n_max_ = 0;
  std::optional<double> e_cut_;
  std::vector<std::size_t> offsets_{0};
  std::vector<ModeCount> entries_;
  std::vector<std::uint32_t> numbers_;
  std::vector<Lowering> lowerings_;
  std::vector<std::int64_t> one_boson_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Number of states with at most n_max bosons in `modes` modes and no energy
/// cutoff: sum_{n=0}^{n_max} C(modes + n - 1, n). Saturates at SIZE_MAX.
std::size_t untruncated_dimension(std::size_t modes, std::size_t n_max);

/// Enumerate all admissible occupations. Throws BudgetError when the dimension
/// exceeds `max_dimension`.
FockBasis build_basis(std::shared_ptr<const MomentumGrid> grid, std::size_t n_max,
                      std::optional<double> e_cut = std::nullopt,
                      std::size_t max_dimension = kDefaultBasisBudget);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

/// b+_m on the basis. Annihilation is the transpose; images that leave the
/// basis are dropped.
SparseMatrix creation_matrix(const FockBasis& basis, std::size_t mode);

/// All creation matrices from one pass over the basis.
std::vector<SparseMatrix> creation_matrices(const FockBasis& basis);

}  // namespace fiber
