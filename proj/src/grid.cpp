#include "cerenkov_fiber/grid.hpp"

#include "cerenkov_fiber/numeric_format.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace fiber {

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 0) return;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double pj = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
        p0 = p1;
        p1 = pj;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double shell_volume(double k_min, double k_max) {
  return 4.0 * kPi / 3.0 * (k_max * k_max * k_max - k_min * k_min * k_min);
}

namespace {

std::vector<double> radial_cell_edges(const RadialSpec& spec) {
  std::vector<double> edges(spec.count + 1);
  const double n = static_cast<double>(spec.count);
  for (std::size_t i = 0; i <= spec.count; ++i) {
    const double t = static_cast<double>(i) / n;
    edges[i] = spec.spacing == RadialSpacing::linear
                   ? spec.k_min + t * (spec.k_max - spec.k_min)
                   : spec.k_min * std::pow(spec.k_max / spec.k_min, t);
  }
  edges.front() = spec.k_min;
  edges.back() = spec.k_max;
  return edges;
}

}  // namespace

MomentumGrid build_grid(const RadialSpec& radial, const AngularSpec& angular,
                        std::size_t mode_budget) {
  if (!(radial.k_min > 0.0) || !std::isfinite(radial.k_min)) {
    throw InvalidArgument("grid: k_min must be positive");
  }
  if (radial.count == 0 || angular.polar_count == 0 || angular.azimuthal_count == 0) {
    throw InvalidArgument("grid: node counts must be at least 1");
  }
  const bool degenerate = radial.k_max == radial.k_min;
  if (degenerate) {
    if (radial.count != 1 || !radial.cell_volume || !(*radial.cell_volume > 0.0)) {
      throw InvalidArgument(
          "grid: k_max == k_min requires a single radial node and a positive cell_volume");
    }
  } else if (!(radial.k_max > radial.k_min) || !std::isfinite(radial.k_max)) {
    throw InvalidArgument("grid: k_max must exceed k_min");
  }
  const std::size_t angular_nodes = angular.polar_count * angular.azimuthal_count;
  if (radial.count > mode_budget || angular_nodes > mode_budget ||
      radial.count * angular_nodes > mode_budget) {
    std::ostringstream msg;
    msg << "grid: " << radial.count << " x " << angular_nodes
        << " modes exceed the mode budget " << mode_budget;
    throw BudgetError(msg.str(), radial.count * angular_nodes);
  }

  MomentumGrid grid;
  grid.k_min_ = radial.k_min;
  grid.k_max_ = radial.k_max;
  grid.radial_nodes_ = radial.count;
  grid.angular_nodes_ = angular_nodes;

  std::vector<double> radius(radial.count);
  std::vector<double> radial_measure(radial.count);
  if (degenerate) {
    grid.radial_edges_ = {radial.k_min, radial.k_max};
    radius[0] = radial.k_min;
    radial_measure[0] = *radial.cell_volume / (4.0 * kPi);
  } else {
    grid.radial_edges_ = radial_cell_edges(radial);
    const auto& e = grid.radial_edges_;
    for (std::size_t i = 0; i < radial.count; ++i) {
      radius[i] = radial.spacing == RadialSpacing::linear ? 0.5 * (e[i] + e[i + 1])
                                                          : std::sqrt(e[i] * e[i + 1]);
      radial_measure[i] = (e[i + 1] * e[i + 1] * e[i + 1] - e[i] * e[i] * e[i]) / 3.0;
    }
  }

  std::vector<double> cos_nodes;
  std::vector<double> cos_weights;
  gauss_legendre(angular.polar_count, cos_nodes, cos_weights);
  const double dphi = 2.0 * kPi / static_cast<double>(angular.azimuthal_count);

  grid.modes_.reserve(radial.count * angular_nodes);
  for (std::size_t ir = 0; ir < radial.count; ++ir) {
    for (std::size_t ip = 0; ip < angular.polar_count; ++ip) {
      const double c = cos_nodes[ip];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (std::size_t ia = 0; ia < angular.azimuthal_count; ++ia) {
        const double phi = dphi * static_cast<double>(ia);
        Mode mode;
        mode.k = radius[ir] * Vec3(s * std::cos(phi), s * std::sin(phi), c);
        mode.vol = radial_measure[ir] * cos_weights[ip] * dphi;
        mode.radial_index = static_cast<int>(ir);
        mode.polar_index = static_cast<int>(ip);
        mode.azimuthal_index = static_cast<int>(ia);
        grid.modes_.push_back(mode);
      }
    }
  }
  grid.validate();
  return grid;
}

MomentumGrid MomentumGrid::from_modes(std::vector<Mode> modes, Vec3 axis) {
  if (modes.empty()) throw InvalidArgument("grid: custom grid needs at least one mode");
  if (!(axis.norm() > 0.0)) throw InvalidArgument("grid: axis must be nonzero");
  MomentumGrid grid;
  grid.modes_ = std::move(modes);
  grid.axis_ = axis.normalized();
  grid.k_min_ = grid.modes_.front().norm();
  grid.k_max_ = grid.k_min_;
  for (const auto& m : grid.modes_) {
    grid.k_min_ = std::min(grid.k_min_, m.norm());
    grid.k_max_ = std::max(grid.k_max_, m.norm());
  }
  if (!(grid.k_min_ > 0.0)) throw InvalidArgument("grid: custom modes must have |k| > 0");
  grid.radial_nodes_ = grid.modes_.size();
  grid.angular_nodes_ = 1;
  grid.validate();
  return grid;
}

void MomentumGrid::validate() const {
  std::set<std::tuple<double, double, double>> seen;
  for (const auto& m : modes_) {
    if (!(m.vol > 0.0) || !std::isfinite(m.vol)) {
      throw InvalidArgument("grid: every mode volume must be positive");
    }
    if (!seen.emplace(m.k.x(), m.k.y(), m.k.z()).second) {
      throw InvalidArgument("grid: mode momenta must be pairwise distinct");
    }
  }
}

double MomentumGrid::max_radial_width() const {
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < radial_edges_.size(); ++i) {
    w = std::max(w, radial_edges_[i + 1] - radial_edges_[i]);
  }
  return w;
}

double MomentumGrid::total_volume() const {
  double v = 0.0;
  for (const auto& m : modes_) v += m.vol;
  return v;
}

void MomentumGrid::write_csv(std::ostream& out) const {
  out << "k_x,k_y,k_z,vol\n";
  for (const auto& m : modes_) {
    out << format_double(m.k.x()) << ',' << format_double(m.k.y()) << ','
        << format_double(m.k.z()) << ',' << format_double(m.vol) << '\n';
  }
}

}  // namespace fiber
