#include "uniformize/grid_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "uniformize/error.hpp"

namespace uniformize {

namespace {

struct Sample {
  double offset;  // signed distance along the axis
  double value;
};

// Up to two samples walking from node k in direction d.
int chain(const GridFunction& u, std::size_t k, Dir d, std::array<Sample, 2>& out) {
  const GridDomain& dom = *u.domain;
  const double h = dom.h();
  const double sign = (d == Dir::East || d == Dir::North) ? 1.0 : -1.0;
  const Arm& a1 = dom.arm(k, d);
  if (a1.crossing >= 0) {
    out[0] = {sign * a1.theta * h, u.boundary[a1.crossing]};
    return 1;
  }
  if (!u.available(a1.neighbor)) return 0;
  out[0] = {sign * h, u.values[a1.neighbor]};
  const Arm& a2 = dom.arm(static_cast<std::size_t>(a1.neighbor), d);
  if (a2.crossing >= 0) {
    out[1] = {sign * (1.0 + a2.theta) * h, u.boundary[a2.crossing]};
    return 2;
  }
  if (!u.available(a2.neighbor)) return 1;
  out[1] = {sign * 2.0 * h, u.values[a2.neighbor]};
  return 2;
}

// Derivative at 0 of the quadratic through (0, f0), (t1, f1), (t2, f2).
double three_point(double f0, Sample s1, Sample s2) {
  const double t1 = s1.offset, t2 = s2.offset;
  return -f0 * (1.0 / t1 + 1.0 / t2) + s1.value * t2 / (t1 * (t2 - t1)) - s2.value * t1 / (t2 * (t2 - t1));
}

double spacing(Sample a, Sample b) {
  return std::min({std::abs(a.offset), std::abs(b.offset), std::abs(a.offset - b.offset)});
}

double axis_derivative(const GridFunction& u, std::size_t k, Dir minus, Dir plus) {
  std::array<Sample, 2> lo{}, hi{};
  const int nlo = chain(u, k, minus, lo);
  const int nhi = chain(u, k, plus, hi);
  const double f0 = u.values[k];
  double best = -1.0;
  double result = 0.0;
  auto consider = [&](Sample a, Sample b, double bonus) {
    const double s = spacing(a, b) * bonus;
    if (s > best) {
      best = s;
      result = three_point(f0, a, b);
    }
  };
  if (nlo >= 1 && nhi >= 1) consider(lo[0], hi[0], 1.0 + 1e-9);
  if (nhi == 2) consider(hi[0], hi[1], 1.0);
  if (nlo == 2) consider(lo[0], lo[1], 1.0);
  if (best >= 0.0) return result;
  if (nhi >= 1) return (hi[0].value - f0) / hi[0].offset;
  if (nlo >= 1) return (lo[0].value - f0) / lo[0].offset;
  return 0.0;
}

}  // namespace

GridFunction::GridFunction(DomainPtr d, double fill)
    : domain(std::move(d)),
      values(domain->interior_count(), fill),
      boundary(domain->crossings().size(), fill) {}

GridFunction GridFunction::sample(DomainPtr d, const std::function<double(Point)>& f) {
  GridFunction u(std::move(d));
  for (std::size_t k = 0; k < u.values.size(); ++k) u.values[k] = f(u.domain->point(k));
  const auto cs = u.domain->crossings();
  for (std::size_t c = 0; c < cs.size(); ++c) u.boundary[c] = f(cs[c].point);
  return u;
}

std::optional<double> GridFunction::interpolate(Point p) const {
  const GridDomain& dom = *domain;
  const Point q = dom.grid().lattice(p);
  int i = static_cast<int>(std::floor(q.real()));
  int j = static_cast<int>(std::floor(q.imag()));
  i = std::clamp(i, 0, dom.grid().nx - 1);
  j = std::clamp(j, 0, dom.grid().ny - 1);
  const double tx = q.real() - i, ty = q.imag() - j;
  if (tx < -1e-9 || ty < -1e-9 || tx > 1 + 1e-9 || ty > 1 + 1e-9) return std::nullopt;
  const std::ptrdiff_t k00 = dom.interior_index(i, j), k10 = dom.interior_index(i + 1, j);
  const std::ptrdiff_t k01 = dom.interior_index(i, j + 1), k11 = dom.interior_index(i + 1, j + 1);
  if (!available(k00) || !available(k10) || !available(k01) || !available(k11)) return std::nullopt;
  return (1 - tx) * (1 - ty) * values[k00] + tx * (1 - ty) * values[k10] + (1 - tx) * ty * values[k01] +
         tx * ty * values[k11];
}

Point GridFunction::gradient(std::size_t k) const {
  return {axis_derivative(*this, k, Dir::West, Dir::East), axis_derivative(*this, k, Dir::South, Dir::North)};
}

double GridFunction::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (available(static_cast<std::ptrdiff_t>(k))) m = std::min(m, values[k]);
  return m;
}

double GridFunction::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (available(static_cast<std::ptrdiff_t>(k))) m = std::max(m, values[k]);
  return m;
}

double max_abs_difference(const GridFunction& a, const GridFunction& b) {
  if (a.domain.get() != b.domain.get() && !(a.domain->subset_of(*b.domain) && b.domain->subset_of(*a.domain))) {
    throw Error(ErrorCode::InvalidArgument, "grid functions live on different domains");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    if (a.available(kk) && b.available(kk)) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  }
  return m;
}

ComplexField ComplexField::sample(DomainPtr d, const std::function<std::complex<double>(Point)>& f) {
  ComplexField out(std::move(d));
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = f(out.domain->point(k));
  return out;
}

std::optional<std::complex<double>> ComplexField::interpolate(Point p) const {
  const GridDomain& dom = *domain;
  const Point q = dom.grid().lattice(p);
  int i = std::clamp(static_cast<int>(std::floor(q.real())), 0, dom.grid().nx - 1);
  int j = std::clamp(static_cast<int>(std::floor(q.imag())), 0, dom.grid().ny - 1);
  const double tx = q.real() - i, ty = q.imag() - j;
  if (tx < -1e-9 || ty < -1e-9 || tx > 1 + 1e-9 || ty > 1 + 1e-9) return std::nullopt;
  const std::ptrdiff_t k00 = dom.interior_index(i, j), k10 = dom.interior_index(i + 1, j);
  const std::ptrdiff_t k01 = dom.interior_index(i, j + 1), k11 = dom.interior_index(i + 1, j + 1);
  if (k00 < 0 || k10 < 0 || k01 < 0 || k11 < 0) return std::nullopt;
  return (1 - tx) * (1 - ty) * values[k00] + tx * (1 - ty) * values[k10] + (1 - tx) * ty * values[k01] +
         tx * ty * values[k11];
}

}  // namespace uniformize
