#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "uniformize/domain.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

Labeling connected_components(const GridGeometry& grid, std::span<const std::uint8_t> interior) {
  if (interior.size() != grid.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "mask size does not match lattice");
  }
  Labeling out;
  const std::size_t n = grid.node_count();
  out.interior_label.assign(n, -1);
  out.exterior_label.assign(n, -1);
  std::deque<std::size_t> queue;

  for (std::size_t seed = 0; seed < n; ++seed) {
    const bool in = interior[seed] != 0;
    std::vector<int>& label = in ? out.interior_label : out.exterior_label;
    if (label[seed] >= 0) continue;
    const int id = in ? out.interior_components++ : out.exterior_components++;
    label[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      const int i = grid.col_of(cur);
      const int j = grid.row_of(cur);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          if (in && di != 0 && dj != 0) continue;  // 4-connectivity inside
          const int ni = i + di, nj = j + dj;
          if (!grid.contains(ni, nj)) continue;
          const std::size_t nb = grid.id(ni, nj);
          if ((interior[nb] != 0) != in || label[nb] >= 0) continue;
          label[nb] = id;
          queue.push_back(nb);
        }
      }
    }
  }
  return out;
}

GridDomain fill_holes(const GridDomain& domain, Point basepoint) {
  if (domain.nearest_interior(basepoint) < 0) {
    throw Error(ErrorCode::BasepointOutside, "fill_holes basepoint is not an interior node");
  }
  const GridGeometry& grid = domain.grid();
  std::vector<std::uint8_t> mask = domain.interior_mask();
  const Labeling lab = connected_components(grid, mask);

  std::vector<std::uint8_t> unbounded(static_cast<std::size_t>(lab.exterior_components), 0);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    if (lab.exterior_label[id] >= 0 && grid.on_frame(grid.col_of(id), grid.row_of(id))) {
      unbounded[lab.exterior_label[id]] = 1;
    }
  }
  bool changed = false;
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const int l = lab.exterior_label[id];
    if (l >= 0 && !unbounded[l]) {
      mask[id] = 1;
      changed = true;
    }
  }
  if (!changed) return domain;

  return GridDomain(grid, std::move(mask), [&](std::size_t node, Dir d) {
    const std::ptrdiff_t k = domain.interior_index(node);
    if (k < 0 || domain.arm(k, d).crossing < 0) {
      throw Error(ErrorCode::InvalidArgument, "filled hole adjacent to the unbounded complement");
    }
    const Crossing& c = domain.crossings()[domain.arm(k, d).crossing];
    return std::pair{c.theta, c.part};
  });
}

int euler_characteristic(const GridDomain& domain) {
  long vertices = static_cast<long>(domain.interior_count());
  long edges = 0;
  long faces = 0;
  for (std::size_t k = 0; k < domain.interior_count(); ++k) {
    const int i = domain.col(k);
    const int j = domain.row(k);
    const bool east = domain.is_interior_node(i + 1, j);
    const bool north = domain.is_interior_node(i, j + 1);
    edges += east + north;
    if (east && north && domain.is_interior_node(i + 1, j + 1)) ++faces;
  }
  return static_cast<int>(vertices - edges + faces);
}

int boundary_component_count(const GridDomain& domain) {
  return static_cast<int>(domain.loops().size());
}

void check_min_feature(const GridDomain& domain, double min_width) {
  const double h = domain.h();
  if (min_width <= 0.0) min_width = 3.0 * h;
  const double half = 0.5 * min_width;
  const GridGeometry& grid = domain.grid();
  std::vector<std::uint8_t> deep(grid.node_count(), 0);
  std::size_t deep_count = 0;
  for (std::size_t k = 0; k < domain.interior_count(); ++k) {
    if (domain.clearance(domain.point(k), half) >= half * (1.0 - 1e-12)) {
      deep[domain.interior_nodes()[k]] = 1;
      ++deep_count;
    }
  }
  if (deep_count == 0) {
    throw Error(ErrorCode::FeatureTooSmall,
                "domain is nowhere wider than " + std::to_string(min_width));
  }
  // Deep cores of a domain without necks stay connected; count them with
  // 8-connectivity (the complement labels of the inverted mask).
  std::vector<std::uint8_t> inverted(deep.size());
  for (std::size_t id = 0; id < deep.size(); ++id) inverted[id] = deep[id] ? 0 : 1;
  const Labeling lab = connected_components(grid, inverted);
  int cores = 0;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(lab.exterior_components), 0);
  for (std::size_t id = 0; id < deep.size(); ++id) {
    if (deep[id] && !seen[lab.exterior_label[id]]) {
      seen[lab.exterior_label[id]] = 1;
      ++cores;
    }
  }
  if (cores > 1) {
    throw Error(ErrorCode::FeatureTooSmall,
                "domain has a neck narrower than " + std::to_string(min_width) + " (" +
                    std::to_string(cores) + " separated cores)");
  }
}

GridDomain minus_disk(const GridDomain& domain, Point center, double radius, int part) {
  const GridGeometry& grid = domain.grid();
  std::vector<std::uint8_t> mask = domain.interior_mask();
  for (std::size_t id : domain.interior_nodes()) {
    if (std::abs(grid.node_point(id) - center) <= radius) mask[id] = 0;
  }
  const double h = grid.h;
  return GridDomain(grid, std::move(mask), [&](std::size_t node, Dir d) {
    const int q = index_of(d);
    const Point p = grid.node_point(node);
    const Point dir(kDi[q], kDj[q]);
    const std::ptrdiff_t k = domain.interior_index(node);
    double theta = 1.0;
    int tag = part;
    double limit = 1.0;
    if (domain.arm(k, d).crossing >= 0) {
      const Crossing& c = domain.crossings()[domain.arm(k, d).crossing];
      theta = c.theta;
      tag = c.part;
      limit = c.theta;
    }
    const Point w = p - center;
    const double b = (w * std::conj(dir)).real();
    const double disc = b * b - (std::norm(w) - radius * radius);
    if (disc >= 0.0) {
      const double t = (-b - std::sqrt(disc)) / h;
      if (t > 0.0 && t <= limit) {
        theta = std::min(t, 1.0);
        tag = part;
      }
    }
    return std::pair{theta, tag};
  });
}

}  // namespace uniformize
