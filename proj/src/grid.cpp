#include "uniformize/grid.hpp"

#include <cmath>

#include "uniformize/error.hpp"

namespace uniformize {

GridGeometry GridGeometry::covering(double xmin, double ymin, double xmax, double ymax, double h) {
  if (!(h > 0.0) || !(xmax > xmin) || !(ymax > ymin)) {
    throw Error(ErrorCode::InvalidArgument, "grid box must be non-empty and h > 0");
  }
  GridGeometry g;
  g.origin = Point(xmin, ymin);
  g.h = h;
  // Tolerate boxes that are an exact multiple of h up to roundoff.
  g.nx = static_cast<int>(std::ceil((xmax - xmin) / h - 1e-9));
  g.ny = static_cast<int>(std::ceil((ymax - ymin) / h - 1e-9));
  if (g.nx < 2 || g.ny < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid box must span at least two cells per axis");
  }
  return g;
}

bool GridGeometry::same_lattice(const GridGeometry& other) const {
  return nx == other.nx && ny == other.ny && h == other.h && origin == other.origin;
}

}  // namespace uniformize
