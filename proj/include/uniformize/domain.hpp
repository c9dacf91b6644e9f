#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "uniformize/grid.hpp"

namespace uniformize {

enum class NodeKind : std::uint8_t { Exterior = 0, Boundary = 1, Interior = 2 };

/// A grid edge leaving an interior node that meets the true boundary.
struct Crossing {
  std::size_t node = 0;  // global id of the interior endpoint
  Dir dir = Dir::East;
  double theta = 1.0;    // arm length in units of h, in (0, 1]
  Point point;
  int part = 0;          // boundary part tag: 0 outer boundary, 1 excised disk
};

/// Closed polyline of crossings, traversed with the domain on the left.
struct BoundaryLoop {
  std::vector<std::size_t> crossings;
  double signed_area = 0.0;

  bool counter_clockwise() const { return signed_area > 0.0; }
};

/// Stencil arm of an interior node in one direction. Either the neighbor is
/// interior (theta = 1, neighbor >= 0) or the arm ends on a crossing.
struct Arm {
  double theta = 1.0;
  std::ptrdiff_t neighbor = -1;  // interior index
  std::ptrdiff_t crossing = -1;
};

/// Masked uniform grid with Shortley-Weller boundary arms.
///
/// Interior nodes never sit on the lattice frame, so every interior node
/// has four arms. Crossings are ordered by (interior node, direction).
class GridDomain {
 public:
  /// Returns (theta, part) for the edge from interior node `node` in `dir`
  /// towards a non-interior neighbour.
  using CrossingRule = std::function<std::pair<double, int>(std::size_t node, Dir dir)>;

  GridDomain(const GridGeometry& grid, std::vector<std::uint8_t> interior, const CrossingRule& rule);

  /// Staircase domain: every crossing sits on the neighbouring node (theta = 1).
  static GridDomain from_mask(const GridGeometry& grid, std::vector<std::uint8_t> interior);

  const GridGeometry& grid() const { return grid_; }
  double h() const { return grid_.h; }

  NodeKind kind(std::size_t id) const { return kinds_[id]; }
  NodeKind kind(int i, int j) const;
  bool is_interior_node(int i, int j) const { return interior_index(i, j) >= 0; }

  std::size_t interior_count() const { return interior_.size(); }
  std::span<const std::size_t> interior_nodes() const { return interior_; }
  std::ptrdiff_t interior_index(std::size_t id) const { return index_[id]; }
  std::ptrdiff_t interior_index(int i, int j) const;
  Point point(std::size_t k) const { return grid_.node_point(interior_[k]); }
  int col(std::size_t k) const { return grid_.col_of(interior_[k]); }
  int row(std::size_t k) const { return grid_.row_of(interior_[k]); }

  const std::array<Arm, 4>& arms(std::size_t k) const { return arms_[k]; }
  const Arm& arm(std::size_t k, Dir d) const { return arms_[k][index_of(d)]; }

  std::span<const Crossing> crossings() const { return crossings_; }
  std::span<const BoundaryLoop> loops() const { return loops_; }

  /// 0/1 per lattice node.
  std::vector<std::uint8_t> interior_mask() const;

  /// Interior node closest to p (by lattice rounding); -1 when that node is
  /// not interior.
  std::ptrdiff_t nearest_interior(Point p) const;

  /// Distance from p to the piecewise-linear boundary, capped at `cap`.
  double clearance(Point p, double cap) const;

  /// Node-set inclusion on a shared lattice.
  bool subset_of(const GridDomain& other) const;

 private:
  void build_loops();

  GridGeometry grid_;
  std::vector<NodeKind> kinds_;
  std::vector<std::ptrdiff_t> index_;
  std::vector<std::size_t> interior_;
  std::vector<std::array<Arm, 4>> arms_;
  std::vector<Crossing> crossings_;
  std::vector<BoundaryLoop> loops_;
  // Boundary segments bucketed by lattice cell (CSR layout).
  std::vector<std::uint32_t> cell_offsets_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cell_segments_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

// --- topology ---------------------------------------------------------------

/// Labels with 4-connectivity for interior nodes and 8-connectivity for the
/// complement. Labels are assigned in row-major first-seen order.
struct Labeling {
  std::vector<int> interior_label;  // -1 on non-interior nodes
  std::vector<int> exterior_label;  // -1 on interior nodes
  int interior_components = 0;
  int exterior_components = 0;
};

Labeling connected_components(const GridGeometry& grid, std::span<const std::uint8_t> interior);

/// Adjoins every complement component that does not touch the lattice frame.
GridDomain fill_holes(const GridDomain& domain, Point basepoint);

/// V - E + F of the cubical complex spanned by interior nodes.
int euler_characteristic(const GridDomain& domain);

int boundary_component_count(const GridDomain& domain);

/// Rejects domains whose necks are narrower than `min_width` (default 3h).
void check_min_feature(const GridDomain& domain, double min_width = 0.0);

/// Removes the open disk |z - center| < radius; new crossings are exact
/// circle intersections tagged with `part`.
GridDomain minus_disk(const GridDomain& domain, Point center, double radius, int part = 1);

// --- level sets ---------------------------------------------------------------

using LevelFunction = std::function<double(Point)>;

struct LevelSpec {
  LevelFunction g;
  double level = 0.0;
  Point basepoint;
  double eps_reg = 1e-3;
};

struct LevelSetDomain {
  DomainPtr domain;
  double level = 0.0;           // level actually used after perturbation
  int perturbation_steps = 0;
  int saddle_nodes = 0;         // sampled saddles of g within one grid step of the level
};

/// Connected component of {g < a} containing the basepoint.
LevelSetDomain from_level_set(const LevelSpec& spec, const GridGeometry& grid);

/// Nested, hole-filled sublevel domains for increasing levels.
std::vector<LevelSetDomain> build_exhaustion(const LevelSpec& spec, std::span<const double> levels,
                                             const GridGeometry& grid);

}  // namespace uniformize
