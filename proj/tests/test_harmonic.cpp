#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "uniformize/error.hpp"
#include "uniformize/harmonic.hpp"
#include "uniformize/oracle.hpp"

using namespace uniformize;
using namespace testing_support;

namespace {

std::vector<double> samples(int M, const std::function<double(double)>& f) {
  std::vector<double> v(M);
  for (int q = 0; q < M; ++q) v[q] = f(2.0 * kPi * q / M);
  return v;
}

double range_excess(const GridFunction& u, const std::vector<double>& data) {
  const double lo = *std::min_element(data.begin(), data.end()), hi = *std::max_element(data.begin(), data.end());
  double m = 0.0;
  for (double v : u.values) m = std::max({m, lo - v, v - hi});
  return m;
}

}  // namespace

TEST_CASE("poisson extension of simple data") {
  CHECK(poisson_extend(samples(64, [](double) { return 3.0; }), Point(0.2, -0.2)) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(poisson_extend(samples(64, [](double t) { return std::cos(t); }), Point(0.5, 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(poisson_extend(samples(64, [](double t) { return std::cos(2.0 * t); }), Point(0.3, 0.4)) ==
        doctest::Approx(-0.07).epsilon(1e-12));
}

TEST_CASE("poisson extension at the centre is the sample mean") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> f(64);
  double mean = 0.0;
  for (double& v : f) mean += (v = U(rng));
  mean /= 64.0;
  CHECK(std::abs(poisson_extend(f, 0.0) - mean) <= 1e-14);
}

TEST_CASE("poisson extension reproduces harmonic polynomials") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double err = 0.0;
  for (int k = 0; k < 32; ++k) {
    const auto re = samples(64, [k](double t) { return std::cos(k * t); });
    const auto im = samples(64, [k](double t) { return std::sin(k * t); });
    for (int s = 0; s < 20; ++s) {
      const C z = std::polar(0.3 * U(rng), 2.0 * kPi * U(rng));
      err = std::max(err, std::abs(poisson_extend(re, z) - std::pow(z, k).real()));
      err = std::max(err, std::abs(poisson_extend(im, z) - std::pow(z, k).imag()));
    }
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("poisson extension rejects points outside the disk") {
  CHECK_THROWS_AS(poisson_extend(samples(16, [](double) { return 1.0; }), Point(1.0, 0.0)), Error);
}

TEST_CASE("mean value deficits") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  const DiskSpec D{0.0, 0.5, 64};
  const auto sq = GridFunction::sample(d, [](Point z) { return std::norm(z); });
  const auto neg = GridFunction::sample(d, [](Point z) { return -std::norm(z); });
  const auto lin = GridFunction::sample(d, [](Point z) { return z.real() - 2.0 * z.imag(); });
  CHECK(std::abs(mean_value_deficit(sq, D) - 0.25) <= h * h);
  CHECK(std::abs(mean_value_deficit(neg, D) + 0.25) <= h * h);
  CHECK(std::abs(mean_value_deficit(lin, D)) <= 1e-12);
  CHECK_THROWS_AS(mean_value_deficit(sq, DiskSpec{Point(0.8, 0.0), 0.3, 64}), Error);
}

TEST_CASE("subharmonicity checks") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  const double radii[] = {2 * h, 4 * h, 8 * h};
  const auto mx = GridFunction::sample(d, [](Point z) { return std::max(z.real(), 0.5 * z.imag() - 0.1); });
  CHECK(check_subharmonic(mx, radii).pass);
  const auto lin = GridFunction::sample(d, [](Point z) { return z.real(); });
  const auto rl = check_subharmonic(lin, radii);
  CHECK(rl.pass);
  CHECK(std::abs(rl.min_deficit) <= 1e-12);
  const auto neg = GridFunction::sample(d, [](Point z) { return -std::norm(z); });
  const auto rn = check_subharmonic(neg, radii);
  CHECK_FALSE(rn.pass);
  CHECK(rn.argmin.radius == doctest::Approx(8 * h));
  CHECK(rn.min_deficit == doctest::Approx(-64 * h * h).epsilon(0.05));
}

TEST_CASE("harmonic replacement") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  const DiskSpec D{0.0, 0.5, 64};

  const auto lin = GridFunction::sample(d, [](Point z) { return z.real() + 0.5 * z.imag(); });
  CHECK(max_abs_difference(harmonic_replacement(lin, D), lin) <= 10 * h * h);

  const auto sq = GridFunction::sample(d, [](Point z) { return std::norm(z); });
  const auto out = harmonic_replacement(sq, D);
  for (std::size_t k = 0; k < d->interior_count(); ++k) {
    const double r = std::abs(d->point(k));
    if (r < 0.5) REQUIRE(std::abs(out.values[k] - 0.25) <= 10 * h * h);
    if (r > 0.5 + 1e-9) REQUIRE(out.values[k] == sq.values[k]);
  }
}

TEST_CASE("replacement of the truncated logarithm raises it to its Poisson integral") {
  const double h = 1.0 / 32, rho = 0.5;
  const DomainPtr d = disk(1.0, h).domain;
  auto alpha = [rho](Point z) { return std::max(-std::log(std::abs(z) / rho), 0.0); };
  const auto seed = GridFunction::sample(d, [&](Point z) { return z == Point(0.0) ? 10.0 : alpha(z); });
  const DiskSpec D{Point(0.5, 0.0), 0.2, 64};
  const auto out = harmonic_replacement(seed, D);
  // Oracle: fine trapezoid Poisson sums of the exact function on the same circle.
  const int M = 4096;
  std::vector<double> f(M);
  for (int q = 0; q < M; ++q) f[q] = alpha(D.center + std::polar(D.radius, 2.0 * kPi * q / M));
  double worst = 0.0, gain = 0.0;
  for (std::size_t k = 0; k < d->interior_count(); ++k) {
    const Point w = (d->point(k) - D.center) / D.radius;
    REQUIRE(out.values[k] >= seed.values[k] - 10 * h * h);
    if (std::abs(w) > 0.9) continue;
    worst = std::max(worst, std::abs(out.values[k] - poisson_extend(f, w)));
    gain = std::max(gain, out.values[k] - seed.values[k]);
  }
  CHECK(worst <= 10 * h * h);
  CHECK(gain > 0.01);
}

TEST_CASE("replacement never lowers a subharmonic input by more than 10 h^2") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int c = 0; c < 10; ++c) {
    const double a = U(rng), b = U(rng), e = U(rng), f = U(rng);
    const auto u = GridFunction::sample(d, [&](Point z) {
      return std::max(a * z.real() + b * z.imag(), (z * z).real() * e + f * 0.3);
    });
    const DiskSpec D{std::polar(0.4 * std::abs(U(rng)), kPi * U(rng)), 0.3, 64};
    const auto out = harmonic_replacement(u, D);
    for (std::size_t k = 0; k < d->interior_count(); ++k) REQUIRE(out.values[k] >= u.values[k] - 10 * h * h);
  }
}

TEST_CASE("dirichlet solver basics") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  const std::vector<double> c(d->crossings().size(), -1.5);
  for (auto m : {DirichletMethod::Sor, DirichletMethod::Direct}) {
    const auto r = solve_dirichlet(d, c, m);
    for (double v : r.solution.values) REQUIRE(std::abs(v + 1.5) <= 1e-10);
    const auto lin = solve_dirichlet(d, trace(*d, [](Point z) { return z.real(); }), m);
    double err = 0.0;
    for (std::size_t k = 0; k < d->interior_count(); ++k) err = std::max(err, std::abs(lin.solution.values[k] - d->point(k).real()));
    CHECK(err <= h * h);
  }
}

TEST_CASE("SOR agrees with DIRECT on a 48 x 48 grid and obeys the maximum principle") {
  const double h = 1.0 / 32;
  const DomainPtr d = square(0.75, h).domain;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int c = 0; c < 5; ++c) {
    const double a = U(rng), b = U(rng), e = U(rng);
    const auto data = trace(*d, [&](Point z) { return std::sin(3 * a * z.real()) + b * z.imag() * z.imag() + e * std::exp(z.real()); });
    const auto sor = solve_dirichlet(d, data, DirichletMethod::Sor);
    const auto direct = solve_dirichlet(d, data, DirichletMethod::Direct);
    CHECK(max_abs_difference(sor.solution, direct.solution) <= 1e-8);
    CHECK(range_excess(sor.solution, data) <= 1e-10);
    CHECK(range_excess(direct.solution, data) <= 1e-10);
  }
}

TEST_CASE("dirichlet solver failures") {
  const DomainPtr big = disk(1.0, 1.0 / 128).domain;
  try {
    solve_dirichlet(big, std::vector<double>(big->crossings().size(), 0.0), DirichletMethod::Direct);
    FAIL("expected size rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeExceeded);
  }
  const DomainPtr d = disk(1.0, 1.0 / 32).domain;
  SorOptions few;
  few.max_iterations = 3;
  try {
    solve_dirichlet(d, trace(*d, [](Point z) { return z.real(); }), DirichletMethod::Sor, few);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConverged);
  }
}

TEST_CASE("perron: discrete solution is a fixpoint") {
  const double h = 1.0 / 32;
  const DomainPtr d = square(1.0, h).domain;
  const auto data = trace(*d, [](Point z) { return z.real() * z.imag() + z.real(); });
  const auto exact = dense_laplace(d, data).solution;
  const auto p = perron_solve(data, exact);
  CHECK(max_abs_difference(p.solution, exact) <= 1e-12);
  CHECK(p.min_increment >= -1e-12);
}

TEST_CASE("perron: annulus converges to the radial solution") {
  const double h = 1.0 / 32;
  const auto L = level("ring", {{"radius", 0.75}}, 0.25, Point(0.75, 0.0), box(1.0 + 4 * h, h));
  const DomainPtr d = L.domain;
  const double r0 = 0.75 - L.level, r1 = 0.75 + L.level;
  const auto data = trace(*d, [](Point z) { return std::abs(z) > 0.75 ? 1.0 : 0.0; });
  GridFunction seed(d, 0.0);
  seed.boundary = data;
  const auto p = perron_solve(data, seed);
  CHECK(p.min_increment >= -1e-12);
  double err = 0.0;
  for (std::size_t k = 0; k < d->interior_count(); ++k) {
    err = std::max(err, std::abs(p.solution.values[k] - std::log(std::abs(d->point(k)) / r0) / std::log(r1 / r0)));
  }
  CHECK(err <= 10 * h * h);
}

TEST_CASE("perron: linear data on the square") {
  const double h = 1.0 / 32;
  const DomainPtr d = square(1.0, h).domain;
  const auto data = trace(*d, [](Point z) { return z.real(); });
  GridFunction seed(d, -2.0);
  seed.boundary = data;
  const auto p = perron_solve(data, seed);
  double err = 0.0;
  for (std::size_t k = 0; k < d->interior_count(); ++k) err = std::max(err, std::abs(p.solution.values[k] - d->point(k).real()));
  CHECK(err <= 10 * h * h);
  CHECK(max_abs_difference(p.solution, dense_laplace(d, data).solution) <= 10 * h * h);
}

TEST_CASE("perron: seeds that are not admissible are rejected") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  const auto data = trace(*d, [](Point z) { return z.real(); });
  auto bump = GridFunction::sample(d, [](Point z) { return -5.0 - 20.0 * std::norm(z); });
  bump.boundary.assign(data.size(), -30.0);
  CHECK_THROWS_AS(perron_solve(data, bump), Error);
  GridFunction above(d, 3.0);
  above.boundary.assign(data.size(), 3.0);
  CHECK_THROWS_AS(perron_solve(data, above), Error);
  PerronConfig bad;
  bad.radii = {0.5 * h};
  GridFunction low(d, -2.0);
  low.boundary.assign(data.size(), -2.0);
  CHECK_THROWS_AS(perron_solve(data, low, bad), Error);
}

TEST_CASE("perron iterates never decrease on random data") {
  const double h = 1.0 / 32;
  const DomainPtr d = disk(1.0, h).domain;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int c = 0; c < 3; ++c) {
    const double a = U(rng), b = U(rng);
    const auto data = trace(*d, [&](Point z) { return std::cos(3 * a * z.real() + b) * z.imag(); });
    GridFunction seed(d, -1.5);
    seed.boundary = data;
    const auto p = perron_solve(data, seed);
    CHECK(p.min_increment >= -1e-12);
    CHECK(max_abs_difference(p.solution, dense_laplace(d, data).solution) <= 10 * h * h);
  }
}
