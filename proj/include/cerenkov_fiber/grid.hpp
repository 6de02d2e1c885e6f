#pragma once

#include "cerenkov_fiber/common.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace fiber {

enum class RadialSpacing { geometric, linear };

struct RadialSpec {
  double k_min = 0.05;
  double k_max = 1.0;
  std::size_t count = 8;
  RadialSpacing spacing = RadialSpacing::geometric;
  // Only used for the degenerate single shell k_min == k_max, count == 1,
  // where it is the total volume carried by that shell.
  std::optional<double> cell_volume;
};

struct AngularSpec {
  std::size_t polar_count = 1;
  std::size_t azimuthal_count = 1;
};

inline constexpr std::size_t kDefaultModeBudget = 200000;

/// One quadrature node of boson momentum space.
struct Mode {
  Vec3 k = Vec3::Zero();
  double vol = 0.0;
  // Position in the product quadrature; -1 for modes supplied by hand.
  int radial_index = -1;
  int polar_index = -1;
  int azimuthal_index = -1;

  double norm() const { return k.norm(); }
};

/// Product quadrature of the spherical shell k_min <= |k| <= k_max.
/// Immutable after construction.
class MomentumGrid {
 public:
  /// Custom grid from explicit nodes. Volumes must be positive and momenta distinct.
  static MomentumGrid from_modes(std::vector<Mode> modes, Vec3 axis = Vec3::UnitZ());

  std::size_t size() const { return modes_.size(); }
  const Mode& mode(std::size_t m) const { return modes_[m]; }
  const std::vector<Mode>& modes() const { return modes_; }

  double k_min() const { return k_min_; }
  double k_max() const { return k_max_; }
  std::size_t radial_nodes() const { return radial_nodes_; }
  std::size_t angular_nodes() const { return angular_nodes_; }
  const Vec3& axis() const { return axis_; }

  /// Radial cell edges (radial_nodes + 1 values); empty for custom grids.
  const std::vector<double>& radial_edges() const { return radial_edges_; }
  double max_radial_width() const;
  double total_volume() const;

  /// Rows k_x,k_y,k_z,vol with a header line.
  void write_csv(std::ostream& out) const;

 private:
  friend MomentumGrid build_grid(const RadialSpec&, const AngularSpec&, std::size_t);
  MomentumGrid() = default;
  void validate() const;

  std::vector<Mode> modes_;
  std::vector<double> radial_edges_;
  double k_min_ = 0.0;
  double k_max_ = 0.0;
  std::size_t radial_nodes_ = 0;
  std::size_t angular_nodes_ = 0;
  Vec3 axis_ = Vec3::UnitZ();
};

MomentumGrid build_grid(const RadialSpec& radial, const AngularSpec& angular,
                        std::size_t mode_budget = kDefaultModeBudget);

/// Gauss-Legendre nodes and weights on [-1,1], nodes ascending.
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Volume of the shell k_min <= |k| <= k_max.
double shell_volume(double k_min, double k_max);

}  // namespace fiber
