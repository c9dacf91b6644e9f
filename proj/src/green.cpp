#include "uniformize/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uniformize/error.hpp"
#include "uniformize/oracle.hpp"

namespace uniformize {

const char* to_string(GreenRoute route) { return route == GreenRoute::Direct ? "DIRECT" : "PERRON"; }

std::optional<std::size_t> pole_node_of(const GridDomain& domain, Point p) {
  const auto k = domain.nearest_interior(p);
  if (k < 0 || std::abs(domain.point(static_cast<std::size_t>(k)) - p) > 1e-9 * domain.h()) return std::nullopt;
  return static_cast<std::size_t>(k);
}

namespace {

DirichletMethod pick(const GridDomain& d, std::optional<DirichletMethod> m) {
  if (m) return *m;
  return d.interior_count() <= kDenseMaxUnknowns ? DirichletMethod::Direct : DirichletMethod::Sor;
}

void require_pole_clearance(const GridDomain& d, Point x0) {
  const double h = d.h();
  if (d.nearest_interior(x0) < 0) throw Error(ErrorCode::ClearanceViolation, "pole is not inside the domain");
  const double c = d.clearance(x0, 3.0 * h);
  if (c < 3.0 * h * (1.0 - 1e-12)) {
    throw Error(ErrorCode::ClearanceViolation,
                "pole clearance " + std::to_string(c / h) + "h is below the required 3h");
  }
}

// G and H from the regular part on the full interior.
void assemble(GreenResult& r, const DomainPtr& domain, const std::vector<double>& h_values, double h_pole_shift) {
  const GridDomain& dom = *domain;
  r.H = GridFunction(domain);
  r.G = GridFunction(domain);
  const auto cs = dom.crossings();
  for (std::size_t c = 0; c < cs.size(); ++c) r.H.boundary[c] = std::log(std::abs(cs[c].point - r.pole));
  r.min_G = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    r.H.values[k] = h_values[k] + h_pole_shift;
    if (r.pole_node && *r.pole_node == k) continue;
    r.G.values[k] = r.H.values[k] - std::log(std::abs(dom.point(k) - r.pole));
    r.min_G = std::min(r.min_G, r.G.values[k]);
  }
  r.G.puncture = r.pole_node;
}

}  // namespace

GreenResult green_direct(DomainPtr domain, Point x0, const GreenDirectOptions& opt) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "null domain");
  const GridDomain& dom = *domain;
  require_pole_clearance(dom, x0);
  GreenResult r;
  r.pole = x0;
  r.pole_node = pole_node_of(dom, x0);
  r.route = GreenRoute::Direct;

  const auto cs = dom.crossings();
  std::vector<double> data(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) data[c] = std::log(std::abs(cs[c].point - x0));
  const DirichletResult sol = solve_dirichlet(domain, data, pick(dom, opt.method), opt.sor);
  r.residual = sol.residual;
  r.sweeps = sol.iterations;
  assemble(r, domain, sol.solution.values, 0.0);
  return r;
}

GreenResult green_perron(DomainPtr domain, Point x0, const GreenPerronOptions& opt) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "null domain");
  const GridDomain& dom = *domain;
  const double h = dom.h();
  require_pole_clearance(dom, x0);
  const double clearance = dom.clearance(x0, h * (dom.grid().nx + dom.grid().ny));
  const double rho = opt.chart_radius > 0.0 ? opt.chart_radius : 0.5 * clearance;
  if (rho < 4.0 * h) {
    throw Error(ErrorCode::ClearanceViolation, "chart disk radius must be at least 4h");
  }
  if (rho + 2.0 * h > clearance * (1.0 + 1e-12)) {
    throw Error(ErrorCode::DiskNotContained, "chart disk does not fit inside the domain with 2h clearance");
  }

  GreenResult r;
  r.pole = x0;
  r.pole_node = pole_node_of(dom, x0);
  r.route = GreenRoute::Perron;
  r.chart_radius = rho;

  // h1: 1 on |xi| = 1/2, 0 on the outer boundary.
  auto k1 = std::make_shared<const GridDomain>(minus_disk(dom, x0, 0.5 * rho, 1));
  const auto c1 = k1->crossings();
  std::vector<double> data1(c1.size());
  for (std::size_t c = 0; c < c1.size(); ++c) data1[c] = c1[c].part == 1 ? 1.0 : 0.0;
  const DirichletResult h1 = solve_dirichlet(k1, data1, pick(*k1, opt.h1_method));

  constexpr int kCircle = 256;
  double a = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < kCircle; ++s) {
    const auto v = h1.solution.interpolate(x0 + std::polar(rho, 2.0 * std::numbers::pi * s / kCircle));
    if (!v) throw Error(ErrorCode::DiskNotContained, "chart circle leaves the domain");
    a = std::max(a, *v);
  }
  r.a = a;
  if (!(a > 0.0 && a < 1.0)) {
    throw Error(ErrorCode::EmptyBarrierWindow, "measured a = " + std::to_string(a) + " is not in (0, 1)");
  }
  const double log2 = std::numbers::ln2;
  r.B = std::max(2.0 * (opt.A0 + log2) / (1.0 - a), 4.0);
  if (!(r.B * a < r.B - log2)) {
    throw Error(ErrorCode::EmptyBarrierWindow, "empty (A, B) window for a = " + std::to_string(a));
  }
  r.A = 0.5 * (r.B * a + r.B - log2);

  const std::size_t n = dom.interior_count();
  PerronSingularity sing;
  sing.singular.assign(n, 0.0);
  sing.regular_form.assign(n, 0);
  sing.cap.assign(n, 0.0);
  sing.pole = r.pole_node;
  sing.pole_seed = 0.0;
  GridFunction seed(domain);
  for (std::size_t k = 0; k < n; ++k) {
    const Point z = dom.point(k);
    if (r.pole_node && *r.pole_node == k) {
      sing.regular_form[k] = 1;
      sing.cap[k] = r.A;
      continue;
    }
    const double xi = std::abs(z - x0) / rho;
    const double S = -std::log(xi);
    sing.singular[k] = S;
    sing.regular_form[k] = xi < 1.0;
    seed.values[k] = std::max(S, 0.0);
    const auto k1i = k1->interior_index(dom.interior_nodes()[k]);
    sing.cap[k] = k1i >= 0 ? std::min(r.B * h1.solution.values[k1i], r.A + S) : r.A + S;
  }
  const auto cs = dom.crossings();
  sing.singular_boundary.resize(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) sing.singular_boundary[c] = -std::log(std::abs(cs[c].point - x0) / rho);

  const std::vector<double> zero(cs.size(), 0.0);
  PerronResult pr = perron_iterate(zero, seed, opt.perron, &sing);
  r.sweeps = pr.sweeps;
  r.cap_activations = pr.cap_activations;
  r.residual = pr.last_change;

  // Regular part in z: H = G + log|z - x0|; at the pole H = v + log rho.
  std::vector<double> hv(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (r.pole_node && *r.pole_node == k) hv[k] = *pr.pole_regular_value + std::log(rho);
    else hv[k] = pr.solution.values[k] + std::log(std::abs(dom.point(k) - x0));
  }
  assemble(r, domain, hv, 0.0);

  const double slack = 10.0 * h * h;
  for (std::size_t k = 0; k < n; ++k) {
    if (r.pole_node && *r.pole_node == k) continue;
    const double xi = std::abs(dom.point(k) - x0) / rho;
    if (xi > 0.5) continue;
    const double S = -std::log(xi);
    const double g = r.G.values[k];
    if (g < S - slack || g > r.A + S + slack) {
      throw Error(ErrorCode::SandwichViolated, "sandwich bound violated at |xi| = " + std::to_string(xi));
    }
  }
  return r;
}

}  // namespace uniformize
