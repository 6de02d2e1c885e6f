#include "cerenkov_fiber/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace fiber {

std::size_t untruncated_dimension(std::size_t modes, std::size_t n_max) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t term = 1;  // C(modes + n - 1, n)
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      if (modes == 0) break;
      // term *= (modes + n - 1) / n, exact in integers via gcd-free ordering.
      const std::size_t num = modes + n - 1;
      if (term > kMax / num) return kMax;
      term = term * num / n;
    }
    if (total > kMax - term) return kMax;
    total += term;
  }
  return total;
}

namespace {

// Depth-first generation of nondecreasing mode lists in lexicographic order.
class Enumerator {
 public:
  Enumerator(const MomentumGrid& grid, std::optional<double> e_cut)
      : grid_(grid), e_cut_(e_cut) {
    norms_.reserve(grid.size());
    for (const auto& m : grid.modes()) norms_.push_back(m.norm());
    tolerance_ = e_cut ? 1e-12 * std::max(1.0, std::abs(*e_cut)) : 0.0;
  }

  template <typename Visit>
  bool run(std::size_t length, Visit&& visit) {
    seq_.assign(length, 0);
    return recurse(0, 0, 0.0, visit);
  }

 private:
  template <typename Visit>
  bool recurse(std::size_t pos, std::uint32_t first, double energy, Visit& visit) {
    if (pos == seq_.size()) return visit(static_cast<const std::vector<std::uint32_t>&>(seq_));
    for (std::uint32_t m = first; m < grid_.size(); ++m) {
      const double e = energy + norms_[m];
      if (e_cut_ && e > *e_cut_ + tolerance_) continue;
      seq_[pos] = m;
      if (!recurse(pos + 1, m, e, visit)) return false;
    }
    return true;
  }

  const MomentumGrid& grid_;
  std::optional<double> e_cut_;
  double tolerance_ = 0.0;
  std::vector<double> norms_;
  std::vector<std::uint32_t> seq_;
};

void to_occupation(const std::vector<std::uint32_t>& seq, Occupation& out) {
  out.clear();
  for (std::uint32_t m : seq) {
    if (!out.empty() && out.back().mode == m) {
      ++out.back().count;
    } else {
      out.push_back({m, 1});
    }
  }
}

Occupation canonicalize(std::span<const ModeCount> occupation) {
  Occupation occ;
  for (const auto& mc : occupation) {
    if (mc.count > 0) occ.push_back(mc);
  }
  std::sort(occ.begin(), occ.end(),
            [](const ModeCount& a, const ModeCount& b) { return a.mode < b.mode; });
  Occupation merged;
  for (const auto& mc : occ) {
    if (!merged.empty() && merged.back().mode == mc.mode) {
      merged.back().count += mc.count;
    } else {
      merged.push_back(mc);
    }
  }
  return merged;
}

}  // namespace

std::string FockBasis::key_of(std::span<const ModeCount> canonical) {
  std::string key(canonical.size() * 2 * sizeof(std::uint32_t), '\0');
  char* p = key.data();
  for (const auto& mc : canonical) {
    std::memcpy(p, &mc.mode, sizeof(std::uint32_t));
    p += sizeof(std::uint32_t);
    std::memcpy(p, &mc.count, sizeof(std::uint32_t));
    p += sizeof(std::uint32_t);
  }
  return key;
}

FockBasis build_basis(std::shared_ptr<const MomentumGrid> grid, std::size_t n_max,
                      std::optional<double> e_cut, std::size_t max_dimension) {
  if (!grid) throw InvalidArgument("basis: grid is null");
  if (e_cut && !(*e_cut >= 0.0)) throw InvalidArgument("basis: E_cut must be nonnegative");
  if (grid->size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw BudgetError("basis: too many modes", grid->size());
  }

  const std::size_t full = untruncated_dimension(grid->size(), n_max);
  if (!e_cut && full > max_dimension) {
    std::ostringstream msg;
    msg << "basis: dimension " << full << " exceeds the budget " << max_dimension;
    throw BudgetError(msg.str(), full);
  }

  FockBasis basis;
  basis.grid_ = grid;
  basis.n_max_ = n_max;
  basis.e_cut_ = e_cut;
  if (full <= max_dimension) basis.numbers_.reserve(full);

  Enumerator enumerator(*grid, e_cut);
  Occupation occ;
  bool over_budget = false;
  for (std::size_t n = 0; n <= n_max && !over_budget; ++n) {
    enumerator.run(n, [&](const std::vector<std::uint32_t>& seq) {
      if (basis.numbers_.size() >= max_dimension) {
        over_budget = true;
        return false;
      }
      to_occupation(seq, occ);
      basis.entries_.insert(basis.entries_.end(), occ.begin(), occ.end());
      basis.offsets_.push_back(basis.entries_.size());
      basis.numbers_.push_back(static_cast<std::uint32_t>(n));
      return true;
    });
  }
  if (over_budget) {
    // Count the remainder without storing it so the error carries the size.
    std::size_t count = 0;
    constexpr std::size_t kCountCap = 1'000'000'000;
    for (std::size_t n = 0; n <= n_max && count < kCountCap; ++n) {
      enumerator.run(n, [&](const std::vector<std::uint32_t>&) { return ++count < kCountCap; });
    }
    std::ostringstream msg;
    msg << "basis: dimension " << (count >= kCountCap ? "> " : "") << count
        << " exceeds the budget " << max_dimension;
    throw BudgetError(msg.str(), count);
  }

  const std::size_t dim = basis.size();
  basis.index_.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    basis.index_.emplace(FockBasis::key_of(basis.state(i)), static_cast<std::uint32_t>(i));
  }

  basis.one_boson_.assign(grid->size(), -1);
  basis.lowerings_.resize(basis.entries_.size());
  Occupation lowered;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto st = basis.state(i);
    if (st.size() == 1 && st[0].count == 1) basis.one_boson_[st[0].mode] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j < st.size(); ++j) {
      lowered.assign(st.begin(), st.end());
      if (--lowered[j].count == 0) lowered.erase(lowered.begin() + static_cast<std::ptrdiff_t>(j));
      // Removing a boson keeps both truncations satisfied.
      const auto it = basis.index_.find(FockBasis::key_of(lowered));
      Lowering& low = basis.lowerings_[basis.offsets_[i] + j];
      low.mode = st[j].mode;
      low.target = it->second;
      low.amplitude = std::sqrt(static_cast<double>(st[j].count));
    }
  }
  return basis;
}

std::optional<std::size_t> FockBasis::find(std::span<const ModeCount> occupation) const {
  const Occupation occ = canonicalize(occupation);
  for (const auto& mc : occ) {
    if (mc.mode >= grid_->size()) return std::nullopt;
  }
  const auto it = index_.find(key_of(occ));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::index_of(std::span<const ModeCount> occupation) const {
  if (auto i = find(occupation)) return *i;
  std::ostringstream msg;
  msg << "basis: occupation {";
  for (const auto& mc : occupation) msg << ' ' << mc.mode << ':' << mc.count;
  msg << " } is not an admissible state";
  throw LookupError(msg.str());
}

std::optional<std::size_t> FockBasis::one_boson_index(std::size_t m) const {
  if (m >= one_boson_.size() || one_boson_[m] < 0) return std::nullopt;
  return static_cast<std::size_t>(one_boson_[m]);
}

double FockBasis::free_field_energy(std::size_t i) const {
  double e = 0.0;
  for (const auto& mc : state(i)) e += mc.count * grid_->mode(mc.mode).norm();
  return e;
}

SparseMatrix creation_matrix(const FockBasis& basis, std::size_t mode) {
  if (mode >= basis.grid().size()) throw InvalidArgument("ladder: mode index out of range");
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& low : basis.lowerings(i)) {
      if (low.mode == mode) triplets.emplace_back(i, low.target, low.amplitude);
    }
  }
  const auto dim = static_cast<std::int64_t>(basis.size());
  SparseMatrix b(dim, dim);
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

std::vector<SparseMatrix> creation_matrices(const FockBasis& basis) {
  const std::size_t modes = basis.grid().size();
  std::vector<std::vector<Eigen::Triplet<double, std::int64_t>>> triplets(modes);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& low : basis.lowerings(i)) {
      triplets[low.mode].emplace_back(i, low.target, low.amplitude);
    }
  }
  const auto dim = static_cast<std::int64_t>(basis.size());
  std::vector<SparseMatrix> out;
  out.reserve(modes);
  for (auto& t : triplets) {
    SparseMatrix b(dim, dim);
    b.setFromTriplets(t.begin(), t.end());
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace fiber
