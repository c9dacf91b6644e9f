#include <algorithm>
#include <cmath>
#include <numbers>

#include "uniformize/error.hpp"
#include "uniformize/green.hpp"
#include "uniformize/oracle.hpp"

namespace uniformize {

Loop circle_loop(Point center, double radius, double h, int turns) {
  if (!(radius > 0.0) || !(h > 0.0) || turns < 1) {
    throw Error(ErrorCode::InvalidArgument, "circle loop needs positive radius, spacing and turns");
  }
  const int per_turn = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / (0.5 * h))));
  Loop loop;
  loop.vertices.reserve(static_cast<std::size_t>(per_turn) * turns + 1);
  for (int t = 0; t < turns; ++t) {
    for (int s = 0; s < per_turn; ++s) {
      loop.vertices.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * s / per_turn));
    }
  }
  loop.vertices.push_back(loop.vertices.front());
  return loop;
}

double default_tol_flux(double h) {
  const double s = 128.0 * h;
  return 1e-2 * s * s;
}

namespace {

void require_loop_clearance(const GridFunction& u, const Loop& loop) {
  const GridDomain& dom = *u.domain;
  const double h = dom.h();
  if (loop.vertices.size() < 2) throw Error(ErrorCode::InvalidArgument, "loop needs at least two vertices");
  for (std::size_t v = 0; v < loop.vertices.size(); ++v) {
    const Point p = loop.vertices[v];
    if (v + 1 < loop.vertices.size() && std::abs(loop.vertices[v + 1] - p) > std::sqrt(2.0) * h * (1 + 1e-9)) {
      throw Error(ErrorCode::InvalidArgument, "consecutive loop vertices farther apart than one cell diagonal");
    }
    if (dom.nearest_interior(p) < 0 || dom.clearance(p, 2.0 * h) < 2.0 * h * (1.0 - 1e-12)) {
      throw Error(ErrorCode::ClearanceViolation, "loop vertex within 2h of the boundary");
    }
    if (u.puncture && std::abs(dom.point(*u.puncture) - p) < 2.0 * h * (1.0 - 1e-12)) {
      throw Error(ErrorCode::ClearanceViolation, "loop vertex within 2h of the pole");
    }
  }
}

}  // namespace

double flux(const GridFunction& u, const Loop& loop) {
  if (!u.domain) throw Error(ErrorCode::InvalidArgument, "grid function has no domain");
  require_loop_clearance(u, loop);
  const GridDomain& dom = *u.domain;
  const GridGeometry& g = dom.grid();
  std::vector<std::optional<Point>> grad(dom.interior_count());
  auto gradient_at = [&](std::ptrdiff_t k) -> const std::optional<Point>& {
    auto& slot = grad[static_cast<std::size_t>(k)];
    if (!slot) slot = u.gradient(static_cast<std::size_t>(k));
    return slot;
  };
  auto field = [&](Point p) -> Point {
    const Point q = g.lattice(p);
    const int i = static_cast<int>(std::floor(q.real())), j = static_cast<int>(std::floor(q.imag()));
    const double tx = q.real() - i, ty = q.imag() - j;
    const std::ptrdiff_t ks[4] = {dom.interior_index(i, j), dom.interior_index(i + 1, j), dom.interior_index(i, j + 1),
                                  dom.interior_index(i + 1, j + 1)};
    for (auto k : ks) {
      if (!u.available(k)) throw Error(ErrorCode::ClearanceViolation, "loop passes next to an unavailable node");
    }
    return (1 - tx) * (1 - ty) * *gradient_at(ks[0]) + tx * (1 - ty) * *gradient_at(ks[1]) +
           (1 - tx) * ty * *gradient_at(ks[2]) + tx * ty * *gradient_at(ks[3]);
  };
  double total = 0.0;
  Point prev_grad = field(loop.vertices.front());
  for (std::size_t v = 1; v < loop.vertices.size(); ++v) {
    const Point d = loop.vertices[v] - loop.vertices[v - 1];
    const Point cur = field(loop.vertices[v]);
    // beta = u_x dy - u_y dx
    const double b0 = prev_grad.real() * d.imag() - prev_grad.imag() * d.real();
    const double b1 = cur.real() * d.imag() - cur.imag() * d.real();
    total += 0.5 * (b0 + b1);
    prev_grad = cur;
  }
  return total;
}

RemovabilityReport removability_test(const GridFunction& u, Point p, double tol_flux) {
  if (!u.domain) throw Error(ErrorCode::InvalidArgument, "grid function has no domain");
  const GridDomain& dom = *u.domain;
  const double h = dom.h();
  RemovabilityReport rep;
  rep.tol_flux = tol_flux > 0.0 ? tol_flux : default_tol_flux(h);
  rep.tol_deviation = 10.0 * h * h;

  // Smallest circle (radius >= 4h) around p that keeps 2h clearance.
  std::optional<Loop> loop;
  const double limit = h * std::max(dom.grid().nx, dom.grid().ny);
  for (double r = 4.0 * h; r <= limit; r += h) {
    Loop candidate = circle_loop(p, r, h);
    try {
      require_loop_clearance(u, candidate);
    } catch (const Error&) {
      continue;
    }
    loop = std::move(candidate);
    rep.loop_radius = r;
    break;
  }
  if (!loop) {
    rep.detail = "no admissible loop around the puncture";
    return rep;
  }
  rep.flux = flux(u, *loop);
  rep.flux_pass = std::abs(rep.flux) <= rep.tol_flux;

  // Extension: fill the holes, drop the puncture, reuse the outer boundary data.
  const auto basepoint = dom.point(0);
  auto filled = std::make_shared<const GridDomain>(fill_holes(dom, basepoint));
  const auto fc = filled->crossings();
  std::vector<double> data(fc.size());
  for (std::size_t c = 0; c < fc.size(); ++c) {
    const auto k = dom.interior_index(fc[c].node);
    const auto old = k >= 0 ? dom.arm(static_cast<std::size_t>(k), fc[c].dir).crossing : -1;
    if (old < 0) throw Error(ErrorCode::InvalidArgument, "filled domain has a crossing the input lacks");
    data[c] = u.boundary[old];
  }
  const bool small = filled->interior_count() <= kDenseMaxUnknowns;
  DirichletResult ext = solve_dirichlet(filled, data, small ? DirichletMethod::Direct : DirichletMethod::Sor);
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    if (!u.available(static_cast<std::ptrdiff_t>(k))) continue;
    const auto kf = filled->interior_index(dom.interior_nodes()[k]);
    rep.deviation = std::max(rep.deviation, std::abs(ext.solution.values[kf] - u.values[k]));
  }
  rep.deviation_pass = rep.deviation <= rep.tol_deviation;
  rep.extension = std::move(ext.solution);
  rep.pass = rep.flux_pass && rep.deviation_pass;
  if (!rep.flux_pass) rep.detail = "nonzero flux around the puncture";
  else if (!rep.deviation_pass) rep.detail = "extension deviates from the input";
  return rep;
}

}  // namespace uniformize
