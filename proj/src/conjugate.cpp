#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

namespace {

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace

ConjugateField harmonic_conjugate(const GreenResult& green, const ConjugateOptions& opt) {
  const DomainPtr& domain = green.G.domain;
  if (!domain) throw Error(ErrorCode::InvalidArgument, "Green function has no domain");
  const GridDomain& dom = *domain;
  const double h = dom.h();
  const Point x0 = green.pole;
  const std::size_t n = dom.interior_count();
  const double tol = opt.tol_flux > 0.0 ? opt.tol_flux : default_tol_flux(h);
  const double clearance = dom.clearance(x0, h * (dom.grid().nx + dom.grid().ny));

  ConjugateField out;
  out.period_radius = std::min(std::max(4.0 * h, 0.5 * clearance), clearance - 2.05 * h);
  out.period = flux(green.G, circle_loop(x0, out.period_radius, h));
  if (std::abs(out.period + 2.0 * std::numbers::pi) > tol) {
    throw Error(ErrorCode::PeriodMismatch, "period " + std::to_string(out.period) + " differs from -2 pi by more than " +
                                               std::to_string(tol));
  }

  // Fourth-order node gradients of H where the wide stencil fits, plus the
  // mixed derivative for the end correction of the trapezoid rule.
  const std::vector<double>& H = green.H.values;
  std::vector<Point> grad_h(n);
  std::vector<double> hxy(n, 0.0);
  std::vector<std::uint8_t> has_hxy(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const int i = dom.col(k), j = dom.row(k);
    Point g = green.H.gradient(k);
    const auto xm2 = dom.interior_index(i - 2, j), xm1 = dom.interior_index(i - 1, j);
    const auto xp1 = dom.interior_index(i + 1, j), xp2 = dom.interior_index(i + 2, j);
    if (xm2 >= 0 && xm1 >= 0 && xp1 >= 0 && xp2 >= 0) {
      g.real((H[xm2] - 8.0 * H[xm1] + 8.0 * H[xp1] - H[xp2]) / (12.0 * h));
    }
    const auto ym2 = dom.interior_index(i, j - 2), ym1 = dom.interior_index(i, j - 1);
    const auto yp1 = dom.interior_index(i, j + 1), yp2 = dom.interior_index(i, j + 2);
    if (ym2 >= 0 && ym1 >= 0 && yp1 >= 0 && yp2 >= 0) {
      g.imag((H[ym2] - 8.0 * H[ym1] + 8.0 * H[yp1] - H[yp2]) / (12.0 * h));
    }
    grad_h[k] = g;
    const auto ne = dom.interior_index(i + 1, j + 1), nw = dom.interior_index(i - 1, j + 1);
    const auto se = dom.interior_index(i + 1, j - 1), sw = dom.interior_index(i - 1, j - 1);
    if (ne >= 0 && nw >= 0 && se >= 0 && sw >= 0) {
      hxy[k] = (H[ne] - H[nw] - H[se] + H[sw]) / (4.0 * h * h);
      has_hxy[k] = 1;
    }
  }

  // Increment of F along the edge k -> q in direction d: exact for the
  // singular part -arg(z - x0), corrected trapezoid for the regular part.
  auto forward = [&](std::size_t a, std::size_t b, bool east) {
    const double fa = east ? -grad_h[a].imag() : grad_h[a].real();
    const double fb = east ? -grad_h[b].imag() : grad_h[b].real();
    double v = 0.5 * h * (fa + fb);
    if (has_hxy[a] && has_hxy[b]) v -= h * h / 12.0 * (east ? -(hxy[b] - hxy[a]) : hxy[b] - hxy[a]);
    return v;
  };
  auto increment = [&](std::size_t k, std::size_t q, Dir d) {
    const double fs = -std::arg((dom.point(q) - x0) / (dom.point(k) - x0));
    double fh = 0.0;
    switch (d) {
      case Dir::East: fh = forward(k, q, true); break;
      case Dir::North: fh = forward(k, q, false); break;
      case Dir::West: fh = -forward(q, k, true); break;
      case Dir::South: fh = -forward(q, k, false); break;
    }
    return fs + fh;
  };

  const std::optional<std::size_t> pole = green.pole_node;
  const Point base_guess = opt.basepoint ? *opt.basepoint : x0 + Point(0.5 * clearance, 0.0);
  const auto base = dom.nearest_interior(base_guess);
  if (base < 0 || (pole && static_cast<std::size_t>(base) == *pole)) {
    throw Error(ErrorCode::InvalidArgument, "conjugate basepoint is not a usable interior node");
  }
  out.basepoint = dom.point(static_cast<std::size_t>(base));

  out.F = GridFunction(domain);
  out.F.puncture = pole;
  std::vector<std::int8_t> parent_dir(n, -1);
  std::vector<std::uint8_t> seen(n, 0);
  std::deque<std::size_t> queue{static_cast<std::size_t>(base)};
  seen[base] = 1;
  if (pole) seen[*pole] = 1;
  auto grow = [&](bool detour) {
    const double keep_out = 2.0 * h * (1.0 - 1e-9);
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      if (detour && k != static_cast<std::size_t>(base) && std::abs(dom.point(k) - x0) < keep_out) continue;
      for (Dir d : kDirs) {
        const auto q = dom.arm(k, d).neighbor;
        if (q < 0 || seen[q]) continue;
        seen[q] = 1;
        parent_dir[q] = static_cast<std::int8_t>(index_of(opposite(d)));
        out.F.values[q] = out.F.values[k] + increment(k, static_cast<std::size_t>(q), d);
        queue.push_back(static_cast<std::size_t>(q));
      }
    }
  };
  // Paths keep 2h away from the pole; nodes cut off by that rule (pole off
  // the lattice) are reached afterwards from their nearest tree neighbours.
  grow(true);
  for (std::size_t k = 0; k < n; ++k) {
    if (seen[k] && !(pole && k == *pole)) queue.push_back(k);
  }
  grow(false);
  for (std::size_t k = 0; k < n; ++k) {
    if (!seen[k]) throw Error(ErrorCode::PeriodMismatch, "spanning tree does not reach every node");
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (pole && k == *pole) continue;
    for (Dir d : {Dir::East, Dir::North}) {
      const auto q = dom.arm(k, d).neighbor;
      if (q < 0 || (pole && static_cast<std::size_t>(q) == *pole)) continue;
      const bool tree = parent_dir[q] == index_of(opposite(d)) || parent_dir[k] == index_of(d);
      if (tree) continue;
      const double defect = wrap(out.F.values[q] - out.F.values[k] - increment(k, static_cast<std::size_t>(q), d));
      out.max_loop_defect = std::max(out.max_loop_defect, std::abs(defect));
      ++out.loops_checked;
    }
  }
  if (out.max_loop_defect > tol) {
    throw Error(ErrorCode::PeriodMismatch,
                "fundamental loop defect " + std::to_string(out.max_loop_defect) + " exceeds " + std::to_string(tol));
  }
  return out;
}

}  // namespace uniformize
