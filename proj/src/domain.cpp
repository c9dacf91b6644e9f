#include "uniformize/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uniformize/error.hpp"

namespace uniformize {

namespace {

double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

GridDomain::GridDomain(const GridGeometry& grid, std::vector<std::uint8_t> interior,
                       const CrossingRule& rule)
    : grid_(grid) {
  if (interior.size() != grid_.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "mask size does not match lattice");
  }
  const std::size_t n = grid_.node_count();
  kinds_.assign(n, NodeKind::Exterior);
  index_.assign(n, -1);
  for (std::size_t id = 0; id < n; ++id) {
    if (!interior[id]) continue;
    if (grid_.on_frame(grid_.col_of(id), grid_.row_of(id))) {
      throw Error(ErrorCode::BoxTooSmall, "interior node on the lattice frame");
    }
    index_[id] = static_cast<std::ptrdiff_t>(interior_.size());
    interior_.push_back(id);
    kinds_[id] = NodeKind::Interior;
  }
  if (interior_.empty()) throw Error(ErrorCode::InvalidArgument, "domain has no interior nodes");

  arms_.resize(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    const int i = grid_.col_of(interior_[k]);
    const int j = grid_.row_of(interior_[k]);
    for (Dir d : kDirs) {
      const int q = index_of(d);
      const std::size_t nb = grid_.id(i + kDi[q], j + kDj[q]);
      Arm& arm = arms_[k][q];
      if (interior[nb]) {
        arm.neighbor = index_[nb];
        continue;
      }
      kinds_[nb] = NodeKind::Boundary;
      const auto [theta, part] = rule(interior_[k], d);
      if (!(theta > 0.0) || theta > 1.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "crossing arm outside (0,1]: " + std::to_string(theta));
      }
      Crossing c;
      c.node = interior_[k];
      c.dir = d;
      c.theta = theta;
      c.part = part;
      c.point = grid_.node_point(i, j) + theta * grid_.h * Point(kDi[q], kDj[q]);
      arm.theta = theta;
      arm.crossing = static_cast<std::ptrdiff_t>(crossings_.size());
      crossings_.push_back(c);
    }
  }
  build_loops();
}

GridDomain GridDomain::from_mask(const GridGeometry& grid, std::vector<std::uint8_t> interior) {
  return GridDomain(grid, std::move(interior), [](std::size_t, Dir) { return std::pair{1.0, 0}; });
}

NodeKind GridDomain::kind(int i, int j) const {
  if (!grid_.contains(i, j)) return NodeKind::Exterior;
  return kinds_[grid_.id(i, j)];
}

std::ptrdiff_t GridDomain::interior_index(int i, int j) const {
  if (!grid_.contains(i, j)) return -1;
  return index_[grid_.id(i, j)];
}

std::vector<std::uint8_t> GridDomain::interior_mask() const {
  std::vector<std::uint8_t> mask(grid_.node_count(), 0);
  for (std::size_t id : interior_) mask[id] = 1;
  return mask;
}

std::ptrdiff_t GridDomain::nearest_interior(Point p) const {
  const Point q = grid_.lattice(p);
  const int i = static_cast<int>(std::lround(q.real()));
  const int j = static_cast<int>(std::lround(q.imag()));
  return interior_index(i, j);
}

bool GridDomain::subset_of(const GridDomain& other) const {
  if (!grid_.same_lattice(other.grid_)) return false;
  return std::all_of(interior_.begin(), interior_.end(),
                     [&](std::size_t id) { return other.index_[id] >= 0; });
}

// Marching squares over the binary mask. Corners are visited counter-clockwise;
// each run of interior corners yields one segment from its exit edge to its
// entry edge, which keeps the domain on the left and separates diagonal
// interior corners (8-connected complement).
void GridDomain::build_loops() {
  const int nx = grid_.nx;
  const int ny = grid_.ny;
  const std::size_t ncells = static_cast<std::size_t>(nx) * ny;
  std::vector<std::ptrdiff_t> next(crossings_.size(), -1);

  cell_offsets_.assign(ncells + 1, 0);
  std::vector<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>> segs;

  auto crossing_on_edge = [&](int ia, int ja, int ib, int jb) -> std::ptrdiff_t {
    const std::ptrdiff_t a = interior_index(ia, ja);
    const std::ptrdiff_t b = interior_index(ib, jb);
    if (a >= 0 && b < 0) {
      for (Dir d : kDirs) {
        const int q = index_of(d);
        if (ia + kDi[q] == ib && ja + kDj[q] == jb) return arms_[a][q].crossing;
      }
    } else if (b >= 0 && a < 0) {
      for (Dir d : kDirs) {
        const int q = index_of(d);
        if (ib + kDi[q] == ia && jb + kDj[q] == ja) return arms_[b][q].crossing;
      }
    }
    return -1;
  };

  // Only cells touching an interior node can carry segments.
  std::vector<std::uint8_t> visit(ncells, 0);
  for (std::size_t id : interior_) {
    const int i = grid_.col_of(id);
    const int j = grid_.row_of(id);
    for (int dj = -1; dj <= 0; ++dj)
      for (int di = -1; di <= 0; ++di) {
        const int ci = i + di, cj = j + dj;
        if (ci >= 0 && cj >= 0 && ci < nx && cj < ny) visit[static_cast<std::size_t>(cj) * nx + ci] = 1;
      }
  }

  for (int cj = 0; cj < ny; ++cj) {
    for (int ci = 0; ci < nx; ++ci) {
      const std::size_t cell = static_cast<std::size_t>(cj) * nx + ci;
      if (!visit[cell]) continue;
      const std::array<std::pair<int, int>, 4> corner{
          std::pair{ci, cj}, std::pair{ci + 1, cj}, std::pair{ci + 1, cj + 1}, std::pair{ci, cj + 1}};
      std::array<bool, 4> in{};
      int count = 0;
      for (int c = 0; c < 4; ++c) {
        in[c] = interior_index(corner[c].first, corner[c].second) >= 0;
        count += in[c];
      }
      if (count == 0 || count == 4) continue;
      auto edge = [&](int e) {
        const auto [ia, ja] = corner[e];
        const auto [ib, jb] = corner[(e + 1) % 4];
        return crossing_on_edge(ia, ja, ib, jb);
      };
      for (int k = 0; k < 4; ++k) {
        if (!(in[k] && !in[(k + 1) % 4])) continue;
        int m = k;
        while (in[(m + 3) % 4]) m = (m + 3) % 4;
        const std::ptrdiff_t exit = edge(k);
        const std::ptrdiff_t entry = edge((m + 3) % 4);
        if (exit < 0 || entry < 0) {
          throw Error(ErrorCode::InvalidArgument, "inconsistent crossing data in marching squares");
        }
        if (next[exit] >= 0) throw Error(ErrorCode::InvalidArgument, "crossing with two successors");
        next[exit] = entry;
        segs.push_back({cell, {static_cast<std::uint32_t>(exit), static_cast<std::uint32_t>(entry)}});
      }
    }
  }

  for (const auto& s : segs) ++cell_offsets_[s.first + 1];
  for (std::size_t c = 0; c < ncells; ++c) cell_offsets_[c + 1] += cell_offsets_[c];
  cell_segments_.resize(segs.size());
  {
    std::vector<std::uint32_t> fill(cell_offsets_.begin(), cell_offsets_.end() - 1);
    for (const auto& s : segs) cell_segments_[fill[s.first]++] = s.second;
  }

  std::vector<std::uint8_t> seen(crossings_.size(), 0);
  for (std::size_t start = 0; start < crossings_.size(); ++start) {
    if (seen[start]) continue;
    BoundaryLoop loop;
    std::size_t c = start;
    do {
      if (next[c] < 0) throw Error(ErrorCode::InvalidArgument, "open boundary polyline");
      seen[c] = 1;
      loop.crossings.push_back(c);
      c = static_cast<std::size_t>(next[c]);
    } while (c != start);
    double area = 0.0;
    for (std::size_t q = 0; q < loop.crossings.size(); ++q) {
      const Point a = crossings_[loop.crossings[q]].point;
      const Point b = crossings_[loop.crossings[(q + 1) % loop.crossings.size()]].point;
      area += a.real() * b.imag() - b.real() * a.imag();
    }
    loop.signed_area = 0.5 * area;
    loops_.push_back(std::move(loop));
  }
}

double GridDomain::clearance(Point p, double cap) const {
  const Point q = grid_.lattice(p);
  const int ci = static_cast<int>(std::floor(q.real()));
  const int cj = static_cast<int>(std::floor(q.imag()));
  const int r = static_cast<int>(std::ceil(cap / grid_.h)) + 1;
  double best = cap;
  for (int j = std::max(0, cj - r); j <= std::min(grid_.ny - 1, cj + r); ++j) {
    for (int i = std::max(0, ci - r); i <= std::min(grid_.nx - 1, ci + r); ++i) {
      const std::size_t cell = static_cast<std::size_t>(j) * grid_.nx + i;
      for (std::uint32_t s = cell_offsets_[cell]; s < cell_offsets_[cell + 1]; ++s) {
        const auto [a, b] = cell_segments_[s];
        best = std::min(best, segment_distance(p, crossings_[a].point, crossings_[b].point));
      }
    }
  }
  return best;
}

}  // namespace uniformize
