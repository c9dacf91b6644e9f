#include "uniformize/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "uniformize/builtins.hpp"
#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"
#include "uniformize/oracle.hpp"

namespace uniformize::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const Point kI{0.0, 1.0};

class Recorder {
 public:
  explicit Recorder(std::string suite) { rep_.suite = std::move(suite); }

  void le(const std::string& name, double v, double limit) { add(name, v, limit, "<=", v <= limit); }
  void ge(const std::string& name, double v, double limit) { add(name, v, limit, ">=", v >= limit); }
  void lt(const std::string& name, double v, double limit) { add(name, v, limit, "<", v < limit); }
  void gt(const std::string& name, double v, double limit) { add(name, v, limit, ">", v > limit); }
  void eq(const std::string& name, double v, double expected) { add(name, v, expected, "==", v == expected); }
  void flag(const std::string& name, bool ok) { eq(name, ok ? 1.0 : 0.0, 1.0); }

  void error(const std::string& name, const std::exception& e) {
    Check c{name, kNaN, kNaN, "error", false, e.what()};
    rep_.pass = false;
    rep_.checks.push_back(std::move(c));
  }

  // Runs a block; an escaping exception becomes a failed check.
  void section(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      error(name + ".exception", e);
    }
  }

  // Passes iff body throws uniformize::Error with the expected code.
  void expect_error(const std::string& name, ErrorCode code, const std::function<void()>& body) {
    std::string got = "none";
    try {
      body();
    } catch (const Error& e) {
      got = to_string(e.code());
      if (e.code() == code) {
        add(name, 1.0, 1.0, "==", true);
        return;
      }
    } catch (const std::exception& e) {
      got = e.what();
    }
    Check c{name, 0.0, 1.0, "==", false, std::string("expected ") + to_string(code) + ", got " + got};
    rep_.pass = false;
    rep_.checks.push_back(std::move(c));
  }

  SuiteReport take() { return std::move(rep_); }

 private:
  void add(const std::string& name, double v, double limit, const char* rel, bool ok) {
    if (std::isnan(v)) ok = false;
    rep_.checks.push_back({name, v, limit, rel, ok, {}});
    rep_.pass = rep_.pass && ok;
  }

  SuiteReport rep_;
};

// --- domain builders ---------------------------------------------------------------

LevelSetDomain level_domain(const LevelFunction& g, double a, Point x0, const GridGeometry& grid) {
  LevelSpec s;
  s.g = g;
  s.level = a;
  s.basepoint = x0;
  return from_level_set(s, grid);
}

GridGeometry box_around(Point c, double half, double h) {
  return GridGeometry::covering(c.real() - half, c.imag() - half, c.real() + half, c.imag() + half, h);
}

LevelSetDomain disk_domain(double radius, double h, Point center = {}) {
  return level_domain(make_level_function("disk", {{"center", {center.real(), center.imag()}}}), radius, center,
                      box_around(center, radius + 4.0 * h, h));
}

LevelSetDomain square_domain(double half, double h) {
  return level_domain(make_level_function("square", {}), half, 0.0, box_around(0.0, half + 4.0 * h, h));
}

LevelSetDomain kidney_domain(double h) {
  return level_domain(make_level_function("kidney", {}), 1.0, 0.0, box_around(0.0, 1.3, h));
}

double max_over(const GridDomain& d, const std::function<double(std::size_t)>& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < d.interior_count(); ++k) m = std::max(m, f(k));
  return m;
}

std::complex<double> mobius(Point z, Point p, double radius) {
  return radius * (z - p) / (radius * radius - std::conj(p) * z);
}

Point random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double r = radius * std::sqrt(U(rng));
  return std::polar(r, 2.0 * kPi * U(rng));
}

// Smooth, generally non-harmonic boundary data.
RealFn random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::array<double, 12> c{};
  for (double& v : c) v = U(rng);
  return [c](Point z) {
    const double x = z.real(), y = z.imag();
    return c[0] * std::cos(2.0 * c[1] * x + 2.0 * c[2] * y + c[3]) + c[4] * std::sin(3.0 * c[5] * x - c[6] * y) +
           c[7] * x * y * y + c[8] * std::exp(c[9] * x) + c[10] * x * x + c[11] * y;
  };
}

double range_excess(const GridFunction& u, std::span<const double> data) {
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  double m = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (!u.available(static_cast<std::ptrdiff_t>(k))) continue;
    m = std::max({m, *lo - u.values[k], u.values[k] - *hi});
  }
  return m;
}

std::vector<double> boundary_data(const GridDomain& d, const RealFn& f) {
  std::vector<double> out;
  out.reserve(d.crossings().size());
  for (const Crossing& c : d.crossings()) out.push_back(f(c.point));
  return out;
}

// --- suites --------------------------------------------------------------------------

SuiteReport suite_poisson(std::uint64_t seed) {
  Recorder r("poisson");
  std::mt19937_64 rng(seed);
  r.section("poisson_extend", [&] {
    constexpr int M = 256;
    std::vector<Point> zs(100);
    for (Point& z : zs) z = random_in_disk(rng, 0.9);
    double err = 0.0;
    std::vector<double> re(M), im(M);
    for (int k = 0; k <= 20; ++k) {
      for (int m = 0; m < M; ++m) {
        const double t = 2.0 * kPi * m / M;
        re[m] = std::cos(k * t);
        im[m] = std::sin(k * t);
      }
      for (Point z : zs) {
        const Point zk = std::pow(z, k);
        err = std::max(err, std::abs(poisson_extend(re, z) - zk.real()));
        err = std::max(err, std::abs(poisson_extend(im, z) - zk.imag()));
      }
    }
    r.le("zk_max_error", err, 1e-10);
    std::vector<double> c(M, 3.0);
    r.le("constant_error", std::abs(poisson_extend(c, Point(0.2, -0.7)) - 3.0), 1e-12);
    for (int m = 0; m < M; ++m) c[m] = std::cos(2.0 * 2.0 * kPi * m / M);
    r.le("cos2_error", std::abs(poisson_extend(c, Point(0.3, 0.4)) + 0.07), 1e-12);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double mean = 0.0;
    for (double& v : c) mean += (v = U(rng));
    r.le("centre_mean_error", std::abs(poisson_extend(c, 0.0) - mean / M), 1e-12);
  });
  r.section("grid", [&] {
    const double h = 1.0 / 32;
    const DomainPtr d = disk_domain(1.0, h).domain;
    const DiskSpec disk{0.0, 0.5, 64};
    const auto quad = GridFunction::sample(d, [](Point z) { return std::norm(z); });
    const auto negq = GridFunction::sample(d, [](Point z) { return -std::norm(z); });
    const auto rez = GridFunction::sample(d, [](Point z) { return z.real(); });
    r.le("deficit_quadratic_error", std::abs(mean_value_deficit(quad, disk) - 0.25), h * h);
    r.le("deficit_neg_quadratic_error", std::abs(mean_value_deficit(negq, disk) + 0.25), h * h);
    r.le("deficit_re_z", std::abs(mean_value_deficit(rez, disk)), 1e-12);

    const std::vector<double> radii{2.0 * h, 4.0 * h};
    const auto maxh = GridFunction::sample(d, [](Point z) { return std::max(z.real(), 0.3 - 0.5 * z.real() + z.imag()); });
    const auto pass = check_subharmonic(maxh, radii);
    r.ge("max_of_harmonics_min_deficit", pass.min_deficit, -pass.tolerance);
    const auto fail = check_subharmonic(negq, radii);
    r.lt("neg_quadratic_min_deficit", fail.min_deficit, -fail.tolerance);
    r.ge("re_z_min_deficit", check_subharmonic(rez, radii).min_deficit, -1e-12);

    const auto rep = harmonic_replacement(quad, disk);
    double inside = 0.0, drop = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < d->interior_count(); ++k) {
      drop = std::max(drop, quad.values[k] - rep.values[k]);
      if (std::abs(d->point(k)) < 0.5 - 1e-9) inside = std::max(inside, std::abs(rep.values[k] - 0.25));
      else if (std::abs(d->point(k)) > 0.5 + 1e-9) outside = std::max(outside, std::abs(rep.values[k] - quad.values[k]));
    }
    r.le("replacement_quadratic_inside_error", inside, h * h);
    r.le("replacement_outside_change", outside, 0.0);
    r.le("replacement_max_decrease", drop, 10.0 * h * h);
    r.le("replacement_re_z_change", max_abs_difference(harmonic_replacement(rez, disk), rez), 1e-12);
  });
  return r.take();
}

SuiteReport suite_maximum(std::uint64_t seed) {
  Recorder r("maximum");
  std::mt19937_64 rng(seed);
  const double h = 1.0 / 32;
  for (const char* shape : {"disk", "square"}) {
    r.section(shape, [&] {
      const DomainPtr d = std::string(shape) == "disk" ? disk_domain(1.0, h).domain : square_domain(1.0, h).domain;
      double excess = 0.0, cross = 0.0;
      for (int c = 0; c < 3; ++c) {
        const auto data = boundary_data(*d, random_smooth(rng));
        const auto sor = solve_dirichlet(d, data, DirichletMethod::Sor);
        const auto direct = solve_dirichlet(d, data, DirichletMethod::Direct);
        excess = std::max({excess, range_excess(sor.solution, data), range_excess(direct.solution, data)});
        cross = std::max(cross, max_abs_difference(sor.solution, direct.solution));
      }
      r.le(std::string(shape) + ".range_excess", excess, 1e-8);
      r.le(std::string(shape) + ".sor_vs_direct", cross, 1e-8);
      const std::vector<double> constant(d->crossings().size(), 2.5);
      const auto cs = solve_dirichlet(d, constant, DirichletMethod::Sor);
      r.le(std::string(shape) + ".constant_error", max_over(*d, [&](std::size_t k) { return std::abs(cs.solution.values[k] - 2.5); }),
           1e-10);
      const auto lin = solve_dirichlet(d, boundary_data(*d, [](Point z) { return z.real(); }), DirichletMethod::Sor);
      r.le(std::string(shape) + ".re_z_error",
           max_over(*d, [&](std::size_t k) { return std::abs(lin.solution.values[k] - d->point(k).real()); }), h * h);
    });
  }
  r.section("size", [&] {
    const DomainPtr big = disk_domain(1.0, 1.0 / 128).domain;
    r.expect_error("direct_size_rejected", ErrorCode::SizeExceeded, [&] {
      solve_dirichlet(big, std::vector<double>(big->crossings().size(), 0.0), DirichletMethod::Direct);
    });
  });
  return r.take();
}

SuiteReport suite_perron(std::uint64_t) {
  Recorder r("perron");
  const double h = 1.0 / 32;
  r.section("annulus", [&] {
    const auto ring = level_domain(make_level_function("ring", {{"radius", 0.75}}), 0.25, Point(0.75, 0.0),
                                   box_around(0.0, 1.0 + 4.0 * h, h));
    const DomainPtr d = ring.domain;
    const double r_in = 0.75 - ring.level, r_out = 0.75 + ring.level;
    const auto data = boundary_data(*d, [](Point z) { return std::abs(z) > 0.75 ? 1.0 : 0.0; });
    GridFunction seed(d, 0.0);
    seed.boundary = data;
    const auto p = perron_solve(data, seed);
    const auto dense = dense_laplace(d, data);
    r.ge("annulus.min_increment", p.min_increment, -1e-12);
    r.le("annulus.vs_dense", max_abs_difference(p.solution, dense.solution), 10.0 * h * h);
    r.le("annulus.vs_radial", max_over(*d, [&](std::size_t k) {
           return std::abs(p.solution.values[k] - std::log(std::abs(d->point(k)) / r_in) / std::log(r_out / r_in));
         }), 10.0 * h * h);
  });
  r.section("square", [&] {
    const DomainPtr d = square_domain(1.0, h).domain;
    const auto data = boundary_data(*d, [](Point z) { return z.real(); });
    GridFunction seed(d, -2.0);
    seed.boundary = data;
    const auto p = perron_solve(data, seed);
    const auto dense = dense_laplace(d, data);
    r.ge("square.min_increment", p.min_increment, -1e-12);
    r.le("square.vs_dense", max_abs_difference(p.solution, dense.solution), 10.0 * h * h);
    r.le("square.vs_linear", max_over(*d, [&](std::size_t k) { return std::abs(p.solution.values[k] - d->point(k).real()); }),
         10.0 * h * h);

    GridFunction fixed = dense.solution;
    const auto again = perron_solve(data, fixed);
    r.le("fixpoint_change", max_abs_difference(again.solution, dense.solution), 1e-9);

    GridFunction above(d, 2.0);
    above.boundary.assign(data.size(), 2.0);
    r.expect_error("seed_above_data_rejected", ErrorCode::InvalidArgument, [&] { perron_solve(data, above); });
  });
  return r.take();
}

SuiteReport suite_green(std::uint64_t) {
  Recorder r("green");
  r.section("disk", [&] {
    std::vector<double> errs;
    for (double h : {1.0 / 32, 1.0 / 64}) {
      const auto L = disk_domain(1.0, h);
      const DomainPtr d = L.domain;
      const auto g = green_direct(d, 0.0);
      errs.push_back(max_over(*d, [&](std::size_t k) {
        if (g.pole_node && *g.pole_node == k) return 0.0;
        const Point z = d->point(k);
        if (d->clearance(z, 4.0 * h) < 4.0 * h) return 0.0;
        return std::abs(g.G.values[k] + std::log(std::abs(z) / L.level));
      }));
      if (h == 1.0 / 64) {
        const auto conj = harmonic_conjugate(g);
        r.le("period_error", std::abs(conj.period + 2.0 * kPi), 0.05);
        r.le("double_loop_error", std::abs(flux(g.G, circle_loop(0.0, 0.5, h, 2)) + 4.0 * kPi), 0.1);
        r.ge("min_G", g.G.min_value(), -10.0 * h * h);
        double trace = 0.0;
        for (double v : g.G.boundary) trace = std::max(trace, std::abs(v));
        r.eq("boundary_trace", trace, 0.0);
      }
    }
    r.le("error_h64", errs[1], 5e-4);
    r.ge("error_order", std::log2(errs[0] / errs[1]), 1.8);
  });
  r.section("square_symmetry", [&] {
    const double h = 1.0 / 32;
    const DomainPtr d = square_domain(1.0, h).domain;
    GreenDirectOptions opt;
    opt.method = DirichletMethod::Direct;
    const auto g = green_direct(d, 0.0, opt);
    double asym = 0.0;
    for (std::size_t k = 0; k < d->interior_count(); ++k) {
      if (!g.G.available(static_cast<std::ptrdiff_t>(k))) continue;
      const Point z = d->point(k);
      for (Point w : {kI * z, -z, -kI * z, std::conj(z), -std::conj(z), kI * std::conj(z), -kI * std::conj(z)}) {
        const auto q = d->nearest_interior(w);
        if (q < 0) throw Error(ErrorCode::InvalidArgument, "square lattice is not symmetric");
        asym = std::max(asym, std::abs(g.G.values[q] - g.G.values[k]));
      }
    }
    r.le("square_dihedral_asymmetry", asym, 1e-10);
  });
  r.section("monotone", [&] {
    const double h = 1.0 / 32;
    const auto grid = box_around(0.0, 1.0 + 4.0 * h, h);
    const DomainPtr small = level_domain(make_level_function("disk", {}), 0.5, 0.0, grid).domain;
    const DomainPtr big = level_domain(make_level_function("disk", {}), 1.0, 0.0, grid).domain;
    const auto gs = green_direct(small, 0.0), gb = green_direct(big, 0.0);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < small->interior_count(); ++k) {
      if (!gs.G.available(static_cast<std::ptrdiff_t>(k))) continue;
      const auto kb = big->interior_index(small->interior_nodes()[k]);
      excess = std::max(excess, gs.G.values[k] - gb.G.values[kb]);
    }
    r.le("domain_monotonicity_excess", excess, 10.0 * h * h);
  });
  r.section("contract", [&] {
    const DomainPtr d = disk_domain(1.0, 1.0 / 32).domain;
    r.expect_error("pole_near_boundary_rejected", ErrorCode::ClearanceViolation,
                   [&] { green_direct(d, Point(1.0 - 2.0 / 32, 0.0)); });
  });
  return r.take();
}

// G - (-log|xi|) = H - log rho on |xi| <= 1/2.
void sandwich_checks(Recorder& r, const std::string& tag, const GreenResult& g, double h) {
  const GridDomain& d = *g.G.domain;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < d.interior_count(); ++k) {
    if (std::abs(d.point(k) - g.pole) > 0.5 * g.chart_radius) continue;
    const double gap = g.H.values[k] - std::log(g.chart_radius);
    lo = std::min(lo, gap);
    hi = std::max(hi, gap - g.A);
  }
  r.ge(tag + ".sandwich_lower", lo, -10.0 * h * h);
  r.le(tag + ".sandwich_upper", hi, 10.0 * h * h);
}

SuiteReport suite_barrier(std::uint64_t) {
  Recorder r("barrier");
  const double h = 1.0 / 32;
  for (const char* shape : {"disk", "square"}) {
    r.section(shape, [&] {
      const std::string tag = shape;
      const DomainPtr d = tag == "disk" ? disk_domain(1.0, h).domain : square_domain(1.0, h).domain;
      const auto direct = green_direct(d, 0.0);
      const auto perron = green_perron(d, 0.0);
      r.le(tag + ".vs_direct", max_abs_difference(direct.G, perron.G), 10.0 * h * h);
      r.gt(tag + ".a_lower", perron.a, 0.0);
      r.lt(tag + ".a_upper", perron.a, 1.0);
      r.gt(tag + ".window", perron.B - std::log(2.0) - perron.A, 0.0);
      r.gt(tag + ".window_low", perron.A - perron.B * perron.a, 0.0);
      sandwich_checks(r, tag, perron, h);
    });
  }
  return r.take();
}

SuiteReport suite_map(std::uint64_t) {
  Recorder r("map");
  r.section("sampled", [&] {
    const DomainPtr d = disk_domain(1.0, 1.0 / 32).domain;
    r.le("cr_identity", cr_residual(ComplexField::sample(d, [](Point z) { return z; })), 1e-10);
    r.le("cr_conjugate_error", std::abs(cr_residual(ComplexField::sample(d, [](Point z) { return std::conj(z); })) - 2.0),
         1e-10);
    r.le("cr_square", cr_residual(ComplexField::sample(d, [](Point z) { return z * z; })), 1e-9);
  });
  r.section("centre", [&] {
    const double h = 1.0 / 64;
    const auto L = disk_domain(1.0, h);
    const auto m = uniformizing_map(green_direct(L.domain, 0.0));
    r.le("rotation_error", aligned_difference(m.phi, [&](Point z) { return z / L.level; }, 4.0 * h), 1e-3);
    const auto n = normalize_map(m);
    r.le("radius_error", std::abs(n.r - L.level), 5e-3);
  });
  r.section("mobius", [&] {
    const Point p(0.3, 0.0);
    std::vector<double> cr;
    for (double h : {1.0 / 64, 1.0 / 128}) {
      const auto L = disk_domain(1.0, h);
      const auto g = green_direct(L.domain, p);
      const auto m = uniformizing_map(g);
      cr.push_back(m.diagnostics.cr_residual);
      if (h != 1.0 / 128) continue;
      const GridDomain& d = *L.domain;
      r.le("mobius_error", aligned_difference(m.phi, [&](Point z) { return mobius(z, p, L.level); }, 4.0 * h), 5e-3);
      const auto n = normalize_map(m);
      r.le("conformal_radius_error", std::abs(n.r - (1.0 - std::norm(p))), 5e-3);
      r.le("renormalized_derivative_error", std::abs(normalize_map(n).d - 1.0), 1e-6);
      double mismatch = 0.0;
      for (std::size_t k = 0; k < d.interior_count(); ++k) {
        if (!g.G.available(static_cast<std::ptrdiff_t>(k))) continue;
        const double e = std::exp(-g.G.values[k]);
        if (std::abs(std::abs(m.phi.values[k]) - e) > 1e-14 * e) mismatch += 1.0;
      }
      r.eq("modulus_mismatches", mismatch, 0.0);
      r.lt("boundary_ring_max_modulus", m.diagnostics.boundary_modulus_max, 1.0);
      r.le("max_modulus", m.diagnostics.max_modulus, 1.0 + 10.0 * h);
      r.le("period_error", std::abs(m.period + 2.0 * kPi), default_tol_flux(h));
    }
    r.ge("cr_order", std::log2(cr[0] / cr[1]), 1.8);
  });
  return r.take();
}

void injectivity_checks(Recorder& r, const std::string& tag, const LevelSetDomain& L, std::uint64_t seed) {
  const auto m = uniformizing_map(green_direct(L.domain, 0.0));
  const auto scan = injectivity_scan(m, 25, seed);
  r.flag(tag + ".injective", scan.pass);
  double bad = 0.0;
  for (int w : scan.windings) bad += w != 1;
  r.eq(tag + ".windings_not_one", bad, 0.0);
  r.eq(tag + ".targets", static_cast<double>(scan.targets.size()), 25.0);
}

SuiteReport suite_degree(std::uint64_t seed) {
  Recorder r("degree");
  const double h = 1.0 / 64;
  r.section("normal_form", [&] {
    const DomainPtr d = disk_domain(1.0, 1.0 / 32).domain;
    const Loop c = circle_loop(0.0, 0.5, 1.0 / 32);
    r.eq("winding_z", winding_count(ComplexField::sample(d, [](Point z) { return z; }), c, 0.0).count, 1.0);
    r.eq("winding_z2", winding_count(ComplexField::sample(d, [](Point z) { return z * z; }), c, 0.0).count, 2.0);
  });
  r.section("disk", [&] { injectivity_checks(r, "disk", disk_domain(1.0, h), seed); });
  r.section("square", [&] { injectivity_checks(r, "square", square_domain(1.0, h), seed); });
  r.section("kidney", [&] { injectivity_checks(r, "kidney", kidney_domain(h), seed); });
  r.section("corrupted", [&] {
    const auto m = uniformizing_map(green_direct(disk_domain(1.0, h).domain, 0.0));
    MapResult bad = m;
    for (auto& v : bad.phi.values) v *= v;
    const Loop contour = boundary_contour(*bad.phi.domain);
    r.eq("corrupted_winding", winding_count(bad.phi, contour, 0.0).count, 2.0);
    r.flag("corrupted_rejected", !injectivity_scan(bad, 25, seed).pass);
  });
  return r.take();
}

// Disk of radius `outer` minus up to `holes` separated round holes.
std::vector<std::uint8_t> holed_mask(const GridGeometry& grid, double outer, int holes, std::mt19937_64& rng,
                                     int* made) {
  const double h = grid.h;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::pair<Point, double>> cut;
  for (int attempt = 0; attempt < 200 && static_cast<int>(cut.size()) < holes; ++attempt) {
    const double rad = h * (2.0 + 3.0 * U(rng));
    const Point c = random_in_disk(rng, outer - rad - 4.0 * h);
    const bool ok = std::all_of(cut.begin(), cut.end(), [&](const auto& o) {
      return std::abs(c - o.first) > rad + o.second + 4.0 * h;
    });
    if (ok) cut.emplace_back(c, rad);
  }
  *made = static_cast<int>(cut.size());
  std::vector<std::uint8_t> mask(grid.node_count(), 0);
  for (std::size_t id = 0; id < mask.size(); ++id) {
    const Point z = grid.node_point(id);
    if (grid.on_frame(grid.col_of(id), grid.row_of(id)) || std::abs(z) >= outer) continue;
    mask[id] = std::none_of(cut.begin(), cut.end(), [&](const auto& o) { return std::abs(z - o.first) <= o.second; });
  }
  return mask;
}

SuiteReport suite_topology(std::uint64_t seed) {
  Recorder r("topology");
  std::mt19937_64 rng(seed);
  r.section("random_holes", [&] {
    const double h = 1.0 / 32;
    const auto grid = box_around(0.0, 1.0 + 3.0 * h, h);
    int idempotent = 0, chi_one = 0, one_loop = 0, chi_before = 0, loops_before = 0, cases = 0;
    for (int c = 0; c < 50; ++c) {
      int made = 0;
      auto mask = holed_mask(grid, 1.0, 1 + c % 4, rng, &made);
      const auto dom = GridDomain::from_mask(grid, mask);
      const Point base = dom.point(0);
      const auto once = fill_holes(dom, base);
      const auto twice = fill_holes(once, base);
      ++cases;
      idempotent += once.interior_mask() == twice.interior_mask();
      chi_one += euler_characteristic(once) == 1;
      one_loop += boundary_component_count(once) == 1;
      chi_before += euler_characteristic(dom) == 1 - made;
      loops_before += boundary_component_count(dom) == 1 + made;
    }
    r.eq("idempotent", idempotent, cases);
    r.eq("filled_chi_one", chi_one, cases);
    r.eq("filled_single_loop", one_loop, cases);
    r.eq("holed_chi", chi_before, cases);
    r.eq("holed_loops", loops_before, cases);
  });
  r.section("examples", [&] {
    const double h = 1.0 / 32;
    const auto grid = box_around(0.0, 1.0 + 3.0 * h, h);
    const auto disk = level_domain(make_level_function("disk", {}), 1.0, 0.0, grid);
    const auto ring = level_domain(make_level_function("ring", {{"radius", 0.7}}), 0.3, Point(0.7, 0.0), grid);
    r.eq("disk_chi", euler_characteristic(*disk.domain), 1.0);
    r.eq("annulus_chi", euler_characteristic(*ring.domain), 0.0);
    r.eq("annulus_loops", boundary_component_count(*ring.domain), 2.0);
    const auto filled = fill_holes(*ring.domain, Point(0.7, 0.0));
    r.eq("annulus_filled_loops", boundary_component_count(filled), 1.0);
    r.flag("annulus_filled_is_disk", filled.interior_mask() == disk.domain->interior_mask() ||
                                         filled.interior_count() >= disk.domain->interior_count() - 8);
    const auto lab = connected_components(grid, ring.domain->interior_mask());
    r.eq("annulus_interior_labels", lab.interior_components, 1.0);
    r.eq("annulus_exterior_labels", lab.exterior_components, 2.0);

    std::vector<std::uint8_t> two(grid.node_count(), 0);
    for (std::size_t id = 0; id < two.size(); ++id) {
      const Point z = grid.node_point(id);
      two[id] = std::abs(z - 0.5) < 0.3 || std::abs(z + 0.5) < 0.3;
    }
    r.eq("two_disks_labels", connected_components(grid, two).interior_components, 2.0);
    std::vector<std::uint8_t> full(grid.node_count(), 1);
    const auto lf = connected_components(grid, full);
    r.eq("full_box_interior", lf.interior_components, 1.0);
    r.eq("full_box_exterior", lf.exterior_components, 0.0);

    // Translation by whole cells keeps the labelling.
    GridGeometry wide = grid;
    wide.nx += 5;
    wide.ny += 3;
    std::vector<std::uint8_t> shifted(wide.node_count(), 0);
    const auto m = ring.domain->interior_mask();
    for (std::size_t id = 0; id < m.size(); ++id) shifted[wide.id(grid.col_of(id) + 5, grid.row_of(id) + 3)] = m[id];
    const auto ls = connected_components(wide, shifted);
    bool same = ls.interior_components == lab.interior_components && ls.exterior_components == lab.exterior_components;
    for (std::size_t id = 0; id < m.size() && same; ++id) {
      same = ls.interior_label[wide.id(grid.col_of(id) + 5, grid.row_of(id) + 3)] == lab.interior_label[id];
    }
    r.flag("translation_invariant", same);
  });
  r.section("level_sets", [&] {
    const double h = 1.0 / 64;
    const auto d = disk_domain(1.0, h);
    double off = 0.0;
    for (const Crossing& c : d.domain->crossings()) off = std::max(off, std::abs(std::abs(c.point) - 1.0));
    r.le("circle_crossing_offset", off, h);
    r.expect_error("basepoint_outside", ErrorCode::BasepointOutside, [&] {
      level_domain(make_level_function("disk", {}), 1.0, Point(2.0, 0.0), box_around(0.0, 2.5, h));
    });
    r.expect_error("saddle_basepoint_outside", ErrorCode::BasepointOutside, [&] {
      level_domain(make_level_function("saddle", {}), 0.0, Point(-1.0, 0.0), box_around(0.0, 2.0, h));
    });
    const auto grid = box_around(0.0, 2.0 + 4.0 * h, h);
    const auto inner = level_domain(make_level_function("disk", {}), 1.0, 0.0, grid);
    const auto outer = level_domain(make_level_function("disk", {}), 1.5, 0.0, grid);
    r.flag("nested_levels_subset", inner.domain->subset_of(*outer.domain));
    LevelSpec bump;
    bump.g = make_level_function("annulus_bump", {});
    bump.basepoint = Point(0.5, 0.0);
    const std::vector<double> levels{0.8, 1.5};
    const auto ex = build_exhaustion(bump, levels, grid);
    r.eq("bump_filled_loops", boundary_component_count(*ex[0].domain), 1.0);
    r.eq("bump_filled_chi", euler_characteristic(*ex[0].domain), 1.0);
    r.expect_error("non_increasing_levels", ErrorCode::NestingViolation, [&] {
      const std::vector<double> bad{1.0, 1.0};
      LevelSpec s;
      s.g = make_level_function("disk", {});
      build_exhaustion(s, bad, grid);
    });
    r.expect_error("neck_rejected", ErrorCode::FeatureTooSmall, [&] {
      level_domain(make_level_function("dumbbell", {{"neck", 0.02}}), 1.0, Point(-1.0, 0.0),
                   GridGeometry::covering(-2.0, -1.0, 2.0, 1.0, 1.0 / 32));
    });
  });
  return r.take();
}

SuiteReport suite_exhaustion(std::uint64_t) {
  Recorder r("exhaustion");
  r.section("concentric", [&] {
    const double h = 1.0 / 16;
    LevelSpec s;
    s.g = make_level_function("disk", {});
    const std::vector<double> levels{1.0, 2.0, 4.0, 8.0};
    const auto rep = run_exhaustion(s, levels, box_around(0.0, 8.0 + 4.0 * h, h));
    double rel = 0.0;
    for (const auto& l : rep.levels) rel = std::max(rel, std::abs(l.r / l.level - 1.0));
    r.le("radius_relative_error", rel, 0.01);
    r.eq("verdict_divergent", rep.verdict == Verdict::DivergentRadius, 1.0);
    r.flag("radius_monotone", rep.radius_monotone);
    double identity = 0.0;
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
      identity = std::max(identity, std::abs(rep.levels.back().snapshot[i] - rep.samples[i]));
    }
    r.le("identity_on_K0", identity, 1e-2);
    const std::vector<double> one{1.0};
    r.eq("single_level_undecided", run_exhaustion(s, one, box_around(0.0, 1.0 + 4.0 * h, h)).verdict == Verdict::Undecided,
         1.0);
  });
  r.section("halfplane", [&] {
    const double h = 1.0 / 6;
    LevelSpec s;
    s.g = make_level_function("halfplane_cap", {});
    s.basepoint = kI;
    const std::vector<double> levels{2.0, 4.0, 8.0, 16.0};
    const auto rep = run_exhaustion(s, levels, GridGeometry::covering(-16.0 - 4.0 * h, -4.0 * h, 16.0 + 4.0 * h, 16.0 + 4.0 * h, h));
    r.lt("delta_ratio", rep.levels[3].delta / rep.levels[2].delta, 0.5);
    double cayley = 0.0;
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
      const Point z = rep.samples[i];
      cayley = std::max(cayley, std::abs(rep.levels.back().snapshot[i] - 2.0 * kI * (z - kI) / (z + kI)));
    }
    r.le("cayley_on_K0", cayley, 0.05);
    r.flag("radius_monotone", rep.radius_monotone);
  });
  r.section("square_scaling", [&] {
    const double h = 1.0 / 32;
    LevelSpec s;
    s.g = make_level_function("square", {});
    const std::vector<double> levels{1.0, 1.01, 1.02};
    const auto rep = run_exhaustion(s, levels, box_around(0.0, 1.02 + 4.0 * h, h));
    double drop = 0.0;
    for (std::size_t n = 1; n < rep.levels.size(); ++n) drop = std::max(drop, rep.levels[n - 1].r - rep.levels[n].r);
    r.le("radius_decrease", drop, 10.0 * h * h);
    r.le("delta_per_gap", std::max(rep.levels[1].delta, rep.levels[2].delta) / 0.01, 10.0);
  });
  return r.take();
}

SuiteReport suite_removable(std::uint64_t) {
  Recorder r("removable");
  const double h = 1.0 / 32;
  r.section("bounded", [&] {
    const DomainPtr d = disk_domain(1.0, h).domain;
    auto u = GridFunction::sample(d, [](Point z) { return z.real(); });
    u.puncture = pole_node_of(*d, 0.0);
    const auto rep = removability_test(u, 0.0);
    r.flag("re_z_pass", rep.pass);
    r.le("re_z_flux", std::abs(rep.flux), 1e-3);
    r.le("re_z_deviation", rep.deviation, 10.0 * h * h);
  });
  r.section("pole", [&] {
    const DomainPtr d = disk_domain(1.0, h).domain;
    auto u = GridFunction::sample(d, [](Point z) { return z == Point(0.0) ? 0.0 : -std::log(std::abs(z)); });
    u.puncture = pole_node_of(*d, 0.0);
    const auto rep = removability_test(u, 0.0);
    r.flag("log_rejected", !rep.pass);
    r.le("log_flux_error", std::abs(rep.flux + 2.0 * kPi), 0.05);
  });
  r.section("dipole", [&] {
    const DomainPtr outer = disk_domain(1.0, h).domain;
    const DomainPtr d = std::make_shared<const GridDomain>(minus_disk(*outer, 0.0, 0.2));
    const auto u = GridFunction::sample(d, [](Point z) { return (1.0 / z).real(); });
    const auto rep = removability_test(u, 0.0);
    r.le("dipole_flux", std::abs(rep.flux), rep.tol_flux);
    r.gt("dipole_deviation", rep.deviation, 10.0 * h * h);
    r.flag("dipole_rejected", !rep.pass);
  });
  return r.take();
}

SuiteReport suite_oracle(std::uint64_t seed) {
  Recorder r("oracle");
  r.section("admission", [&] {
    for (const auto& c : analytic_cases()) {
      const auto a = c.admit();
      r.flag("admit." + c.name, a.pass);
    }
    r.expect_error("mobius_pole_too_far", ErrorCode::InvalidArgument, [] { mobius_green(Point(0.8, 0.0)); });
    const auto cy = cayley();
    r.le("cayley_i", std::abs(cy(kI)), 1e-15);
    r.le("cayley_0", std::abs(cy(0.0) + 1.0), 1e-15);
    r.le("cayley_2i", std::abs(cy(2.0 * kI) - 1.0 / 3.0), 1e-15);
    r.le("mobius_centre", std::abs(mobius_green(0.0)(Point(0.5, 0.0)) - std::log(2.0)), 1e-15);
  });
  r.section("dense", [&] {
    std::mt19937_64 rng(seed);
    const double h = 1.0 / 32;
    const DomainPtr d = disk_domain(1.0, h).domain;
    const auto data = boundary_data(*d, random_smooth(rng));
    const auto dense = dense_laplace(d, data);
    r.le("residual_relative", dense.residual / std::max(dense.rhs_norm, 1e-300), 1e-10);
    const auto sor = solve_dirichlet(d, data, DirichletMethod::Sor);
    r.le("vs_sor", max_abs_difference(dense.solution, sor.solution), 1e-8);
    const auto lin = dense_laplace(d, boundary_data(*d, [](Point z) { return z.real(); }));
    r.le("re_z_error", max_over(*d, [&](std::size_t k) { return std::abs(lin.solution.values[k] - d->point(k).real()); }),
         h * h);
    const auto c = dense_laplace(d, std::vector<double>(d->crossings().size(), -1.5));
    r.le("constant_error", max_over(*d, [&](std::size_t k) { return std::abs(c.solution.values[k] + 1.5); }), 1e-12);
  });
  return r.take();
}

using SuiteFn = SuiteReport (*)(std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"poisson", suite_poisson},   {"maximum", suite_maximum},       {"perron", suite_perron},
      {"green", suite_green},       {"barrier", suite_barrier},       {"map", suite_map},
      {"degree", suite_degree},     {"topology", suite_topology},     {"exhaustion", suite_exhaustion},
      {"removable", suite_removable}, {"oracle", suite_oracle},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<SuiteReport> run(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteReport> out;
  bool found = false;
  for (const auto& [suite, fn] : registry()) {
    if (name != "all" && name != suite) continue;
    found = true;
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep = fn(seed);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(rep));
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "unknown verify suite '" + name + "'");
  return out;
}

nlohmann::json report_json(const std::string& name, std::uint64_t seed, const std::vector<SuiteReport>& suites) {
  nlohmann::json arr = nlohmann::json::array();
  bool all_pass = true;
  for (const SuiteReport& s : suites) {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : s.checks) {
      nlohmann::json j{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"relation", c.relation}, {"pass", c.pass}};
      if (!c.detail.empty()) j["detail"] = c.detail;
      checks.push_back(std::move(j));
    }
    arr.push_back({{"suite", s.suite}, {"pass", s.pass}, {"checks", std::move(checks)}});
    all_pass = all_pass && s.pass;
  }
  return {{"suite", name}, {"seed", seed}, {"pass", all_pass}, {"suites", std::move(arr)}};
}

nlohmann::json timings_json(const std::vector<SuiteReport>& suites) {
  nlohmann::json j = nlohmann::json::object();
  for (const SuiteReport& s : suites) j[s.suite] = s.seconds;
  return j;
}

}  // namespace uniformize::verify
