// One line per acceptance criterion; exit status 0 iff all pass.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uniformize/builtins.hpp"
#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"
#include "uniformize/oracle.hpp"

using namespace uniformize;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const C kI{0.0, 1.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

GridGeometry box(double half, double h) { return GridGeometry::covering(-half, -half, half, half, h); }

LevelSetDomain level(const std::string& expr, const nlohmann::json& params, double a, Point x0, const GridGeometry& g) {
  return from_level_set({make_level_function(expr, params), a, x0, 1e-3}, g);
}

LevelSetDomain unit_disk(double h) { return level("disk", {}, 1.0, 0.0, box(1.0 + 4.0 * h, h)); }
LevelSetDomain unit_square(double h) { return level("square", {}, 1.0, 0.0, box(1.0 + 4.0 * h, h)); }

std::vector<double> trace(const GridDomain& d, const std::function<double(Point)>& f) {
  std::vector<double> v;
  for (const Crossing& c : d.crossings()) v.push_back(f(c.point));
  return v;
}

template <class F>
double sup_nodes(const GridDomain& d, F&& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < d.interior_count(); ++k) m = std::max(m, f(k));
  return m;
}

// sup |e^{it} phi - psi| with t from the least-squares fit.
double rotated_sup(const std::vector<C>& phi, const std::vector<C>& psi) {
  C s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += psi[i] * std::conj(phi[i]);
  const C rot = std::abs(s) > 0.0 ? s / std::abs(s) : C(1.0);
  double m = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) m = std::max(m, std::abs(rot * phi[i] - psi[i]));
  return m;
}

// --- criteria ------------------------------------------------------------------------

Outcome poisson_exactness() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int M = 256;
  double err = 0.0;
  for (int k = 0; k <= 20; ++k) {
    std::vector<double> f(M);
    for (int q = 0; q < M; ++q) f[q] = std::cos(k * 2.0 * kPi * q / M);
    for (int s = 0; s < 100; ++s) {
      const C z = std::polar(0.9 * std::sqrt(U(rng)), 2.0 * kPi * U(rng));
      err = std::max(err, std::abs(poisson_extend(f, z) - std::pow(z, k).real()));
    }
  }
  o.require(err <= 1e-10, "max error " + fmt(err));
  return o;
}

Outcome maximum_principle() {
  Outcome o;
  const double h = 1.0 / 64;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double excess = 0.0, cross = 0.0;
  for (int c = 0; c < 20; ++c) {
    const DomainPtr d = (c % 2 ? unit_square(h) : unit_disk(h)).domain;
    std::array<double, 8> a{};
    for (double& v : a) v = U(rng);
    const auto data = trace(*d, [&](Point z) {
      const double x = z.real(), y = z.imag();
      return a[0] * std::sin(2.0 * a[1] * x + 3.0 * a[2] * y) + a[3] * x * x * y + a[4] * std::exp(a[5] * y) +
             a[6] * std::cos(4.0 * a[7] * x * y);
    });
    const auto sor = solve_dirichlet(d, data, DirichletMethod::Sor);
    const auto dense = dense_laplace(d, data);
    const double lo = *std::min_element(data.begin(), data.end()), hi = *std::max_element(data.begin(), data.end());
    for (double v : sor.solution.values) excess = std::max({excess, lo - v, v - hi});
    cross = std::max(cross, max_abs_difference(sor.solution, dense.solution));
  }
  o.require(excess <= 1e-8, "range excess " + fmt(excess));
  o.require(cross <= 1e-8, "SOR vs dense " + fmt(cross));
  return o;
}

Outcome perron_monotone() {
  Outcome o;
  const double h = 1.0 / 64;
  {
    const auto L = level("ring", {{"radius", 0.75}}, 0.25, Point(0.75, 0.0), box(1.0 + 4.0 * h, h));
    const DomainPtr d = L.domain;
    const double r_in = 0.75 - L.level, r_out = 0.75 + L.level;
    const auto data = trace(*d, [](Point z) { return std::abs(z) > 0.75 ? 1.0 : 0.0; });
    GridFunction seed(d, 0.0);
    seed.boundary = data;
    const auto p = perron_solve(data, seed);
    const auto dense = dense_laplace(d, data);
    const double diff = max_abs_difference(p.solution, dense.solution);
    const double radial = sup_nodes(*d, [&](std::size_t k) {
      return std::abs(p.solution.values[k] - std::log(std::abs(d->point(k)) / r_in) / std::log(r_out / r_in));
    });
    o.require(p.min_increment >= -1e-12, "annulus min step " + fmt(p.min_increment));
    o.require(diff <= 10.0 * h * h, "annulus vs dense " + fmt(diff));
    o.require(radial <= 10.0 * h * h, "annulus vs radial " + fmt(radial));
  }
  {
    const DomainPtr d = unit_square(h).domain;
    const auto data = trace(*d, [](Point z) { return z.real(); });
    GridFunction seed(d, -2.0);
    seed.boundary = data;
    const auto p = perron_solve(data, seed);
    const auto dense = dense_laplace(d, data);
    const double diff = max_abs_difference(p.solution, dense.solution);
    o.require(p.min_increment >= -1e-12, "square min step " + fmt(p.min_increment));
    o.require(diff <= 10.0 * h * h, "square vs dense " + fmt(diff));
  }
  return o;
}

Outcome green_order() {
  Outcome o;
  std::vector<double> errs;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    const auto L = unit_disk(h);
    const DomainPtr d = L.domain;
    const auto g = green_direct(d, 0.0);
    errs.push_back(sup_nodes(*d, [&](std::size_t k) {
      const Point z = d->point(k);
      if (!g.G.available(static_cast<std::ptrdiff_t>(k)) || d->clearance(z, 4.0 * h) < 4.0 * h) return 0.0;
      return std::abs(g.G.values[k] + std::log(std::abs(z) / L.level));
    }));
    if (h == 1.0 / 128) {
      const double f = flux(g.G, circle_loop(0.0, 0.5, h));
      o.require(std::abs(f + 2.0 * kPi) <= 0.05, "flux " + fmt(f));
    }
  }
  const double order = std::log2(errs[0] / errs[1]);
  o.require(errs[1] <= 5e-4, "error(1/128) " + fmt(errs[1]));
  o.require(order >= 1.8, "order " + fmt(order));
  return o;
}

Outcome barrier_route() {
  Outcome o;
  const double h = 1.0 / 64;
  for (const char* shape : {"disk", "square"}) {
    const DomainPtr d = (std::string(shape) == "disk" ? unit_disk(h) : unit_square(h)).domain;
    const auto direct = green_direct(d, 0.0);
    const auto perron = green_perron(d, 0.0);
    const double diff = max_abs_difference(direct.G, perron.G);
    double low = 0.0, high = -1e300;
    for (std::size_t k = 0; k < d->interior_count(); ++k) {
      if (!perron.G.available(static_cast<std::ptrdiff_t>(k))) continue;
      const double xi = std::abs(d->point(k)) / perron.chart_radius;
      if (xi > 0.5) continue;
      const double v = perron.G.values[k] + std::log(xi);
      low = std::min(low, v);
      high = std::max(high, v - perron.A);
    }
    const std::string s(shape);
    o.require(diff <= 10.0 * h * h, s + " routes " + fmt(diff));
    o.require(perron.a > 0.0 && perron.a < 1.0, s + " a " + fmt(perron.a));
    o.require(low >= -10.0 * h * h && high <= 10.0 * h * h, s + " sandwich [" + fmt(low) + ", " + fmt(high) + "]");
  }
  return o;
}

Outcome mobius_map() {
  Outcome o;
  const C p(0.3, 0.0);
  std::vector<double> cr;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    const auto L = unit_disk(h);
    const DomainPtr d = L.domain;
    const auto g = green_direct(d, p);
    const auto m = uniformizing_map(g);
    cr.push_back(m.diagnostics.cr_residual);
    if (h != 1.0 / 128) continue;
    const double R = L.level;
    std::vector<C> phi, psi;
    for (std::size_t k = 0; k < d->interior_count(); ++k) {
      const Point z = d->point(k);
      if (d->clearance(z, 4.0 * h) < 4.0 * h) continue;
      phi.push_back(m.phi.values[k]);
      psi.push_back(R * (z - p) / (R * R - std::conj(p) * z));
    }
    const double err = rotated_sup(phi, psi);
    const double r = normalize_map(m).r;
    o.require(err <= 5e-3, "Mobius " + fmt(err));
    o.require(std::abs(r - (1.0 - std::norm(p))) <= 5e-3, "r " + fmt(r));
  }
  const double order = std::log2(cr[0] / cr[1]);
  o.require(order >= 1.8, "cr order " + fmt(order));
  return o;
}

Outcome degree() {
  Outcome o;
  const double h = 1.0 / 64;
  const std::vector<std::pair<std::string, LevelSetDomain>> cases = {
      {"disk", unit_disk(h)},
      {"square", unit_square(h)},
      {"kidney", level("kidney", {}, 1.0, 0.0, box(1.35, h))}};
  for (const auto& [name, L] : cases) {
    const auto m = uniformizing_map(green_direct(L.domain, 0.0));
    const auto rep = injectivity_scan(m, 25, 7);
    const bool all_one = std::all_of(rep.windings.begin(), rep.windings.end(), [](int w) { return w == 1; });
    o.require(rep.windings.size() == 25 && all_one && rep.pass, name + " windings 1 at " + std::to_string(rep.windings.size()));
    if (name == "disk") {
      ComplexField sq = m.phi;
      for (auto& v : sq.values) v *= v;
      const auto w = winding_count(sq, boundary_contour(*L.domain), 0.0);
      o.require(w.count == 2, "corrupted winding " + std::to_string(w.count));
    }
  }
  return o;
}

Outcome topology() {
  Outcome o;
  const double h = 1.0 / 32;
  const GridGeometry grid = box(1.0 + 3.0 * h, h);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int good = 0;
  for (int c = 0; c < 50; ++c) {
    std::vector<std::pair<C, double>> holes;
    const int want = 1 + c % 5;
    for (int t = 0; t < 500 && static_cast<int>(holes.size()) < want; ++t) {
      const double rad = h * (2.0 + 4.0 * U(rng));
      const C ctr = std::polar((0.95 - rad - 4.0 * h) * std::sqrt(U(rng)), 2.0 * kPi * U(rng));
      bool ok = true;
      for (const auto& [q, s] : holes) ok = ok && std::abs(ctr - q) > rad + s + 4.0 * h;
      if (ok) holes.emplace_back(ctr, rad);
    }
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.cols()) * grid.rows(), 0);
    for (int j = 0; j <= grid.ny; ++j) {
      for (int i = 0; i <= grid.nx; ++i) {
        const C z = grid.node_point(i, j);
        bool in = std::abs(z) < 0.95;
        for (const auto& [q, s] : holes) in = in && std::abs(z - q) > s;
        mask[static_cast<std::size_t>(j) * grid.cols() + i] = in;
      }
    }
    const auto dom = GridDomain::from_mask(grid, mask);
    const auto once = fill_holes(dom, dom.point(0));
    const auto twice = fill_holes(once, dom.point(0));
    const int n = static_cast<int>(holes.size());
    good += euler_characteristic(dom) == 1 - n && once.interior_mask() == twice.interior_mask() &&
            euler_characteristic(once) == 1 && boundary_component_count(once) == 1;
  }
  o.require(good == 50, std::to_string(good) + "/50 masks");
  return o;
}

Outcome exhaustion() {
  Outcome o;
  {
    const double h = 1.0 / 16;
    LevelSpec s{make_level_function("disk", {}), 1.0, 0.0, 1e-3};
    const std::vector<double> levels{1.0, 2.0, 4.0, 8.0};
    const auto rep = run_exhaustion(s, levels, box(8.0 + 4.0 * h, h));
    double rel = 0.0;
    for (const auto& l : rep.levels) rel = std::max(rel, std::abs(l.r / l.level - 1.0));
    o.require(rel <= 0.01, "disk radii " + fmt(rel));
    o.require(rep.verdict == Verdict::DivergentRadius, std::string("disk ") + to_string(rep.verdict));
  }
  {
    const double h = 1.0 / 6;
    LevelSpec s{make_level_function("halfplane_cap", {}), 2.0, kI, 1e-3};
    const std::vector<double> levels{2.0, 48.0, 96.0, 128.0};
    const double top = levels.back() + 4.0 * h;
    const auto rep = run_exhaustion(s, levels, GridGeometry::covering(-top, -4.0 * h, top, top, h));
    const auto& last = rep.levels.back();
    std::vector<C> phi, psi;
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
      const C z = rep.samples[i];
      phi.push_back(last.snapshot[i] / last.r);
      psi.push_back((z - kI) / (z + kI));
    }
    const double err = rotated_sup(phi, psi);
    o.require(rep.verdict == Verdict::Converged, std::string("half-plane ") + to_string(rep.verdict));
    o.require(err <= 1e-2, "Cayley " + fmt(err));
  }
  return o;
}

Outcome removable() {
  Outcome o;
  const double h = 1.0 / 64;
  const DomainPtr d = unit_disk(h).domain;
  auto u = GridFunction::sample(d, [](Point z) { return z.real(); });
  u.puncture = pole_node_of(*d, 0.0);
  const auto rep = removability_test(u, 0.0);
  o.require(rep.pass && std::abs(rep.flux) <= 1e-3 && rep.deviation <= 10.0 * h * h,
            "Re z flux " + fmt(rep.flux) + " deviation " + fmt(rep.deviation));
  auto v = GridFunction::sample(d, [](Point z) { return z == C(0.0) ? 0.0 : -std::log(std::abs(z)); });
  v.puncture = pole_node_of(*d, 0.0);
  const auto pole = removability_test(v, 0.0);
  o.require(!pole.pass && std::abs(pole.flux + 2.0 * kPi) <= 0.05, "log flux " + fmt(pole.flux));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "uniformize_acceptance";
  std::filesystem::remove_all(dir);
  std::string bytes[2];
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("run" + std::to_string(run));
    const std::string cmd = std::string("\"") + UZ_CLI_PATH + "\" verify all --seed 5 --out \"" + out.string() + "\" > \"" +
                            (dir / "log.txt").string() + "\" 2>&1";
    std::filesystem::create_directories(dir);
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "run " + std::to_string(run + 1) + " exit " + std::to_string(rc));
    bytes[run] = slurp(out / "verify.json");
  }
  o.require(!bytes[0].empty() && bytes[0] == bytes[1], "reports identical (" + std::to_string(bytes[0].size()) + " bytes)");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "poisson exactness", 1.0, poisson_exactness},
      {2, "maximum principle", 30.0, maximum_principle},
      {3, "perron monotonicity and oracle", 60.0, perron_monotone},
      {4, "green accuracy and order", 60.0, green_order},
      {5, "barrier route fidelity", 120.0, barrier_route},
      {6, "uniformizing map vs mobius", 120.0, mobius_map},
      {7, "degree and injectivity", 60.0, degree},
      {8, "topology surgery", 10.0, topology},
      {9, "exhaustion dichotomy", 300.0, exhaustion},
      {10, "removable singularity", 10.0, removable},
      {11, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = sec < c.budget;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s: %s (%s; %.2fs of %.0fs%s)\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), sec,
                c.budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
