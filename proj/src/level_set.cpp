#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "uniformize/domain.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

namespace {

constexpr int kMaxPerturbationSteps = 100;

// Sign changes of g(neighbour) - g(centre) around the 8-ring; four or more
// marks a sampled saddle.
bool is_sampled_saddle(const GridGeometry& grid, const std::vector<double>& g, int i, int j) {
  static constexpr int ring_i[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int ring_j[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  const double c = g[grid.id(i, j)];
  int changes = 0;
  double prev = g[grid.id(i + ring_i[7], j + ring_j[7])] - c;
  for (int k = 0; k < 8; ++k) {
    const double cur = g[grid.id(i + ring_i[k], j + ring_j[k])] - c;
    if ((prev < 0.0) != (cur < 0.0)) ++changes;
    prev = cur;
  }
  return changes >= 4;
}

// Cubic through the samples at offsets -1, 0, 1, 2 along the edge line,
// started from the linear root. Falls back to the linear root near kinks.
double refine_crossing(double theta, const double* s, double level) {
  const double d1 = s[2] - s[1];
  const double d3 = s[3] - 3.0 * s[2] + 3.0 * s[1] - s[0];
  if (!(std::abs(d3) <= 0.05 * std::abs(d1))) return theta;
  auto p = [&](double t) {
    return -s[0] * t * (t - 1.0) * (t - 2.0) / 6.0 + s[1] * (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 -
           s[2] * (t + 1.0) * t * (t - 2.0) / 2.0 + s[3] * (t + 1.0) * t * (t - 1.0) / 6.0 - level;
  };
  double t = theta;
  for (int it = 0; it < 6; ++it) {
    const double e = 1e-7;
    const double slope = (p(t + e) - p(t - e)) / (2.0 * e);
    if (slope == 0.0) return theta;
    t -= p(t) / slope;
  }
  if (!(t > 0.0 && t <= 1.0) || std::abs(t - theta) > 0.25) return theta;
  return t;
}

}  // namespace

LevelSetDomain from_level_set(const LevelSpec& spec, const GridGeometry& grid) {
  if (!spec.g) throw Error(ErrorCode::InvalidArgument, "level function missing");
  if (!(spec.eps_reg > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_reg must be positive");
  const double h = grid.h;
  const double g0 = spec.g(spec.basepoint);
  if (!(g0 < spec.level)) {
    throw Error(ErrorCode::BasepointOutside,
                "basepoint outside sublevel set (g(x0) = " + std::to_string(g0) +
                    ", level = " + std::to_string(spec.level) + ")");
  }

  const std::size_t n = grid.node_count();
  std::vector<double> g(n);
  for (std::size_t id = 0; id < n; ++id) g[id] = spec.g(grid.node_point(id));

  // Regular-value surrogate: push the level up in steps of eps_reg * h until
  // no sample lies within eps_reg * h of it.
  const double step = spec.eps_reg * h;
  double level = spec.level;
  int steps = 0;
  for (;; ++steps) {
    if (steps > kMaxPerturbationSteps) {
      throw Error(ErrorCode::DegenerateLevel, "level not resolvable within 100 perturbation steps");
    }
    level = spec.level + steps * step;
    const bool clear = std::none_of(g.begin(), g.end(), [&](double v) { return std::abs(v - level) < step; });
    if (clear) break;
  }

  const Point lat = grid.lattice(spec.basepoint);
  const int si = static_cast<int>(std::lround(lat.real()));
  const int sj = static_cast<int>(std::lround(lat.imag()));
  if (!grid.contains(si, sj) || !(g[grid.id(si, sj)] < level)) {
    throw Error(ErrorCode::BasepointOutside, "basepoint node is not inside the sublevel set");
  }

  std::vector<std::uint8_t> mask(n, 0);
  std::deque<std::size_t> queue{grid.id(si, sj)};
  mask[grid.id(si, sj)] = 1;
  bool near_frame = false;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const int i = grid.col_of(cur);
    const int j = grid.row_of(cur);
    if (i < 2 || j < 2 || i > grid.nx - 2 || j > grid.ny - 2) near_frame = true;
    for (int q = 0; q < 4; ++q) {
      const int ni = i + kDi[q], nj = j + kDj[q];
      if (!grid.contains(ni, nj)) continue;
      const std::size_t nb = grid.id(ni, nj);
      if (mask[nb] || !(g[nb] < level)) continue;
      mask[nb] = 1;
      queue.push_back(nb);
    }
  }
  if (near_frame) {
    throw Error(ErrorCode::BoxTooSmall, "sublevel component comes within 2h of the bounding box");
  }

  LevelSetDomain out;
  out.level = level;
  out.perturbation_steps = steps;
  for (std::size_t id = 0; id < n; ++id) {
    if (!mask[id]) continue;
    const int i = grid.col_of(id), j = grid.row_of(id);
    if (is_sampled_saddle(grid, g, i, j)) {
      double spread = 0.0;
      for (int q = 0; q < 4; ++q) spread = std::max(spread, std::abs(g[grid.id(i + kDi[q], j + kDj[q])] - g[id]));
      if (std::abs(g[id] - level) <= spread) ++out.saddle_nodes;
    }
  }

  auto domain = std::make_shared<GridDomain>(grid, std::move(mask), [&](std::size_t node, Dir d) {
    const int q = index_of(d);
    const int i = grid.col_of(node), j = grid.row_of(node);
    const std::size_t nb = grid.id(i + kDi[q], j + kDj[q]);
    double theta = std::clamp((level - g[node]) / (g[nb] - g[node]), 1e-12, 1.0);
    if (grid.contains(i - kDi[q], j - kDj[q]) && grid.contains(i + 2 * kDi[q], j + 2 * kDj[q])) {
      const double s[4] = {g[grid.id(i - kDi[q], j - kDj[q])], g[node], g[nb], g[grid.id(i + 2 * kDi[q], j + 2 * kDj[q])]};
      theta = std::clamp(refine_crossing(theta, s, level), 1e-12, 1.0);
    }
    return std::pair{theta, 0};
  });
  check_min_feature(*domain);
  out.domain = std::move(domain);
  return out;
}

std::vector<LevelSetDomain> build_exhaustion(const LevelSpec& spec, std::span<const double> levels,
                                             const GridGeometry& grid) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "no exhaustion levels");
  for (std::size_t n = 1; n < levels.size(); ++n) {
    if (!(levels[n] > levels[n - 1])) {
      throw Error(ErrorCode::NestingViolation, "exhaustion levels must be strictly increasing");
    }
  }
  std::vector<LevelSetDomain> out;
  for (double a : levels) {
    LevelSpec s = spec;
    s.level = a;
    LevelSetDomain d = from_level_set(s, grid);
    d.domain = std::make_shared<GridDomain>(fill_holes(*d.domain, spec.basepoint));
    if (euler_characteristic(*d.domain) != 1 || boundary_component_count(*d.domain) != 1) {
      throw Error(ErrorCode::NestingViolation, "filled sublevel domain is not simply connected");
    }
    if (!out.empty() && !out.back().domain->subset_of(*d.domain)) {
      throw Error(ErrorCode::NestingViolation,
                  "sublevel domain for level " + std::to_string(a) + " does not contain its predecessor");
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace uniformize
