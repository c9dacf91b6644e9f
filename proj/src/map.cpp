#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

double derivative_radius(const GridDomain& domain, Point x0) {
  const double h = domain.h();
  return std::min(8.0 * h, 0.5 * domain.clearance(x0, 16.0 * h));
}

std::complex<double> derivative_at(const ComplexField& phi, Point x0, double rho, int samples) {
  if (!(rho > 0.0) || samples < 4) throw Error(ErrorCode::InvalidArgument, "bad derivative contour");
  std::complex<double> sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point e = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
    const auto v = phi.interpolate(x0 + rho * e);
    if (!v) throw Error(ErrorCode::DiskNotContained, "derivative contour leaves the domain");
    sum += *v / (rho * e);
  }
  return sum / static_cast<double>(samples);
}

double cr_residual(const ComplexField& phi, double min_clearance) {
  const GridDomain& dom = *phi.domain;
  const double h = dom.h();
  double m = 0.0;
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    const auto& a = dom.arms(k);
    const auto e = a[index_of(Dir::East)].neighbor, w = a[index_of(Dir::West)].neighbor;
    const auto nn = a[index_of(Dir::North)].neighbor, s = a[index_of(Dir::South)].neighbor;
    if (e < 0 || w < 0 || nn < 0 || s < 0) continue;
    if (min_clearance > 0.0 && dom.clearance(dom.point(k), min_clearance) < min_clearance) continue;
    const auto dx = (phi.values[e] - phi.values[w]) / (2.0 * h);
    const auto dy = (phi.values[nn] - phi.values[s]) / (2.0 * h);
    m = std::max(m, std::abs(dx + std::complex<double>(0.0, 1.0) * dy));
  }
  return m;
}

WindingResult winding_count(const ComplexField& phi, const Loop& loop, std::complex<double> w) {
  if (!loop.closed()) throw Error(ErrorCode::InvalidArgument, "winding count needs a closed loop");
  const double h = phi.domain->h();
  std::vector<std::complex<double>> vals(loop.vertices.size());
  for (std::size_t v = 0; v < loop.vertices.size(); ++v) {
    const Point p = loop.vertices[v];
    const auto f = phi.interpolate(p);
    if (!f) throw Error(ErrorCode::InvalidArgument, "loop leaves the field");
    double grad = 0.0;
    for (Point step : {Point(0.5 * h, 0.0), Point(0.0, 0.5 * h)}) {
      const auto a = phi.interpolate(p + step), b = phi.interpolate(p - step);
      if (a && b) grad = std::max(grad, std::abs(*a - *b) / h);
    }
    if (std::abs(*f - w) < 5.0 * h * grad) {
      throw Error(ErrorCode::NearZeroOnContour, "phi - w nearly vanishes on the contour");
    }
    vals[v] = *f - w;
  }
  double total = 0.0;
  for (std::size_t v = 1; v < vals.size(); ++v) total += std::arg(vals[v] / vals[v - 1]);
  WindingResult r;
  r.raw = total / (2.0 * std::numbers::pi);
  r.count = static_cast<int>(std::lround(r.raw));
  r.residual = std::abs(r.raw - r.count);
  if (r.residual > 0.1) {
    throw Error(ErrorCode::WindingResidual, "winding rounding residual " + std::to_string(r.residual));
  }
  return r;
}

Loop boundary_contour(const GridDomain& domain, double depth) {
  const GridGeometry& g = domain.grid();
  const double need = depth * domain.h();
  std::vector<std::uint8_t> mask(g.node_count(), 0);
  for (std::size_t k = 0; k < domain.interior_count(); ++k) {
    if (domain.clearance(domain.point(k), need) >= need * (1.0 - 1e-12)) mask[domain.interior_nodes()[k]] = 1;
  }
  const Labeling lab = connected_components(g, mask);
  if (lab.interior_components == 0) throw Error(ErrorCode::FeatureTooSmall, "domain too thin for a contour");
  std::vector<std::size_t> sizes(static_cast<std::size_t>(lab.interior_components), 0);
  for (int l : lab.interior_label) {
    if (l >= 0) ++sizes[l];
  }
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::size_t any = 0;
  for (std::size_t id = 0; id < mask.size(); ++id) {
    mask[id] = lab.interior_label[id] == keep;
    if (mask[id]) any = id;
  }
  const GridDomain eroded = fill_holes(GridDomain::from_mask(g, std::move(mask)), g.node_point(any));
  const auto loops = eroded.loops();
  const auto outer = std::max_element(loops.begin(), loops.end(), [](const BoundaryLoop& a, const BoundaryLoop& b) {
    return a.signed_area < b.signed_area;
  });
  Loop loop;
  for (std::size_t c : outer->crossings) {
    const Point p = eroded.crossings()[c].point;
    if (loop.vertices.empty() || loop.vertices.back() != p) loop.vertices.push_back(p);
  }
  if (loop.vertices.size() > 1 && loop.vertices.back() == loop.vertices.front()) loop.vertices.pop_back();
  loop.vertices.push_back(loop.vertices.front());
  return loop;
}

MapResult assemble_map(const GreenResult& green, const ConjugateField& conj) {
  const DomainPtr& domain = green.G.domain;
  const GridDomain& dom = *domain;
  MapResult m;
  m.pole = green.pole;
  m.pole_node = green.pole_node;
  m.period = conj.period;
  m.phi = ComplexField(domain);
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    if (green.pole_node && *green.pole_node == k) {
      m.phi.values[k] = 0.0;
      continue;
    }
    m.phi.values[k] = std::polar(std::exp(-green.G.values[k]), -conj.F.values[k]);
  }
  m.d = derivative_at(m.phi, m.pole, derivative_radius(dom, m.pole));
  m.r = 1.0 / std::abs(m.d);
  return m;
}

namespace {

void fill_diagnostics(MapResult& m) {
  const GridDomain& dom = *m.phi.domain;
  auto& d = m.diagnostics;
  d.cr_residual = cr_residual(m.phi);
  d.boundary_modulus_min = std::numeric_limits<double>::infinity();
  d.boundary_modulus_max = 0.0;
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    const double a = std::abs(m.phi.values[k]);
    d.max_modulus = std::max(d.max_modulus, a);
    const auto& arms = dom.arms(k);
    if (std::any_of(arms.begin(), arms.end(), [](const Arm& x) { return x.crossing >= 0; })) {
      d.boundary_modulus_min = std::min(d.boundary_modulus_min, a);
      d.boundary_modulus_max = std::max(d.boundary_modulus_max, a);
    }
  }
  const Loop contour = boundary_contour(dom);
  const double s = 0.5 * d.boundary_modulus_min;
  for (std::complex<double> w : {std::complex<double>(0.0), std::complex<double>(s, 0.0), std::complex<double>(0.0, s),
                                 std::complex<double>(-s, 0.0), std::complex<double>(0.0, -s)}) {
    try {
      d.degree_samples.push_back(winding_count(m.phi, contour, w).count);
    } catch (const Error&) {
      d.degree_samples.push_back(0);
    }
  }
}

}  // namespace

MapResult uniformizing_map(const GreenResult& green, const ConjugateOptions& opt) {
  const ConjugateField conj = harmonic_conjugate(green, opt);
  MapResult m = assemble_map(green, conj);
  fill_diagnostics(m);
  return m;
}

MapResult normalize_map(const MapResult& map) {
  const GridDomain& dom = *map.phi.domain;
  const double rho = derivative_radius(dom, map.pole);
  const auto d = derivative_at(map.phi, map.pole, rho);
  if (std::abs(d) < 1e-8) throw Error(ErrorCode::DegeneratePole, "derivative at the pole nearly vanishes");
  MapResult out = map;
  for (auto& v : out.phi.values) v /= d;
  out.image_radius = map.image_radius / std::abs(d);
  out.r = out.image_radius;
  out.d = derivative_at(out.phi, out.pole, rho);
  out.normalized = true;
  return out;
}

InjectivityReport injectivity_scan(const MapResult& map, int sample_count, std::uint64_t seed) {
  const GridDomain& dom = *map.phi.domain;
  const double h = dom.h();
  InjectivityReport rep;
  const Loop contour = boundary_contour(dom);
  double m = std::numeric_limits<double>::infinity();
  for (const Point& p : contour.vertices) m = std::min(m, std::abs(*map.phi.interpolate(p)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool windings_ok = true;
  for (int t = 0; t < sample_count; ++t) {
    const double r = 0.8 * m * std::sqrt(U(rng));
    const std::complex<double> w = std::polar(r, 2.0 * std::numbers::pi * U(rng));
    int count = 0;
    try {
      count = winding_count(map.phi, contour, w).count;
    } catch (const Error&) {
      count = -1;
    }
    rep.targets.push_back(w);
    rep.windings.push_back(count);
    windings_ok = windings_ok && count == 1;
  }

  const std::size_t n = dom.interior_count();
  const int stride = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n) / 1500.0))));
  std::vector<std::complex<double>> vals;
  double min_deriv = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const int i = dom.col(k), j = dom.row(k);
    if (i % stride || j % stride) continue;
    const auto e = dom.arm(k, Dir::East).neighbor, w = dom.arm(k, Dir::West).neighbor;
    if (e < 0 || w < 0) continue;
    min_deriv = std::min(min_deriv, std::abs(map.phi.values[e] - map.phi.values[w]) / (2.0 * h));
    vals.push_back(map.phi.values[k]);
  }
  rep.nodes_sampled = vals.size();
  rep.threshold = h * min_deriv / 4.0;
  rep.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < vals.size(); ++a) {
    for (std::size_t b = a + 1; b < vals.size(); ++b) rep.min_distance = std::min(rep.min_distance, std::abs(vals[a] - vals[b]));
  }
  rep.pass = windings_ok && rep.min_distance > rep.threshold;
  return rep;
}

double aligned_difference(const ComplexField& phi, const std::function<std::complex<double>(Point)>& psi,
                          double min_clearance, double* theta) {
  const GridDomain& dom = *phi.domain;
  std::vector<std::size_t> nodes;
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    if (min_clearance > 0.0 && dom.clearance(dom.point(k), min_clearance) < min_clearance * (1.0 - 1e-12)) continue;
    nodes.push_back(k);
    acc += psi(dom.point(k)) * std::conj(phi.values[k]);
  }
  const double t = std::arg(acc);
  if (theta) *theta = t;
  const auto rot = std::polar(1.0, t);
  double m = 0.0;
  for (std::size_t k : nodes) m = std::max(m, std::abs(rot * phi.values[k] - psi(dom.point(k))));
  return m;
}

}  // namespace uniformize
