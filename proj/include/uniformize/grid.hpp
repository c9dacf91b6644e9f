#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

namespace uniformize {

/// Points in the plane are complex numbers throughout.
using Point = std::complex<double>;

enum class Dir : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

inline constexpr std::array<Dir, 4> kDirs{Dir::East, Dir::North, Dir::West, Dir::South};
inline constexpr std::array<int, 4> kDi{1, 0, -1, 0};
inline constexpr std::array<int, 4> kDj{0, 1, 0, -1};

constexpr int index_of(Dir d) { return static_cast<int>(d); }
constexpr Dir opposite(Dir d) { return static_cast<Dir>((index_of(d) + 2) % 4); }

/// Uniform node lattice: (nx + 1) x (ny + 1) nodes, origin at node (0, 0),
/// node ids row-major (j * cols + i).
struct GridGeometry {
  Point origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  static GridGeometry covering(double xmin, double ymin, double xmax, double ymax, double h);

  int cols() const { return nx + 1; }
  int rows() const { return ny + 1; }
  std::size_t node_count() const { return static_cast<std::size_t>(cols()) * rows(); }
  std::size_t id(int i, int j) const { return static_cast<std::size_t>(j) * cols() + i; }
  int col_of(std::size_t id) const { return static_cast<int>(id % cols()); }
  int row_of(std::size_t id) const { return static_cast<int>(id / cols()); }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i <= nx && j <= ny; }
  bool on_frame(int i, int j) const { return i == 0 || j == 0 || i == nx || j == ny; }

  Point node_point(int i, int j) const { return origin + Point(i * h, j * h); }
  Point node_point(std::size_t id) const { return node_point(col_of(id), row_of(id)); }

  /// Lattice coordinates of a point (fractional node indices).
  Point lattice(Point p) const { return (p - origin) / h; }

  bool same_lattice(const GridGeometry& other) const;
};

}  // namespace uniformize
