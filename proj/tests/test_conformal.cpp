#include "doctest.h"
#include "helpers.hpp"
#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"

using namespace uniformize;
using namespace testing_support;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("conjugate of the disk green function gives a rotation of z") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const auto g = green_direct(L.domain, 0.0);
  const auto conj = harmonic_conjugate(g);
  CHECK(std::abs(conj.period + 2 * kPi) <= default_tol_flux(h));
  const auto m = assemble_map(g, conj);
  const double err = aligned_difference(m.phi, [&](Point z) { return disk_map(z, 0.0, L.level); }, 2 * h);
  CHECK(err <= 10 * h * h);
}

TEST_CASE("assembled map is exp(-G - iF) with zero at the pole") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const auto g = green_direct(L.domain, 0.0);
  const auto conj = harmonic_conjugate(g);
  const auto m = assemble_map(g, conj);
  REQUIRE(m.pole_node.has_value());
  CHECK(m.phi.values[*m.pole_node] == C(0.0, 0.0));
  for (std::size_t k = 0; k < L.domain->interior_count(); ++k) {
    if (k == *m.pole_node) continue;
    REQUIRE(m.phi.values[k] == std::polar(std::exp(-g.G.values[k]), -conj.F.values[k]));
    REQUIRE(std::abs(m.phi.values[k]) < 1.0);
  }
}

TEST_CASE("map with an off-centre pole is the disk automorphism") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const Point p(0.3, 0.0);
  const auto m = uniformizing_map(green_direct(L.domain, p));
  const double err = aligned_difference(m.phi, [&](Point z) { return disk_map(z, p, L.level); }, 2 * h);
  CHECK(err <= 10 * h * h);
}

TEST_CASE("cauchy riemann residual separates analytic fields") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const auto id = ComplexField::sample(L.domain, [](Point z) { return z; });
  const auto bar = ComplexField::sample(L.domain, [](Point z) { return std::conj(z); });
  const auto sq = ComplexField::sample(L.domain, [](Point z) { return z * z; });
  CHECK(cr_residual(id) <= 1e-12);
  CHECK(cr_residual(sq) <= 1e-12);
  CHECK(cr_residual(bar) == doctest::Approx(2.0));
}

TEST_CASE("winding counts") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const auto id = ComplexField::sample(L.domain, [](Point z) { return z; });
  const auto sq = ComplexField::sample(L.domain, [](Point z) { return z * z; });
  const Loop loop = circle_loop(0.0, 0.5, h);
  CHECK(winding_count(id, loop, 0.0).count == 1);
  CHECK(winding_count(sq, loop, 0.0).count == 2);
  CHECK(winding_count(id, loop, 0.8).count == 0);
  CHECK(winding_count(id, loop, 0.1).residual <= 1e-10);
  CHECK(code_of([&] { winding_count(id, loop, 0.5); }) == ErrorCode::NearZeroOnContour);
}

TEST_CASE("injectivity scan") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  const auto m = uniformizing_map(green_direct(L.domain, 0.0));
  const auto rep = injectivity_scan(m, 20, 3);
  CHECK(rep.pass);
  CHECK(rep.windings.size() == rep.targets.size());
  for (int w : rep.windings) CHECK(w == 1);

  MapResult squared = m;
  for (auto& v : squared.phi.values) v *= v;
  const auto bad = injectivity_scan(squared, 20, 3);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("normalisation") {
  const double h = 1.0 / 32;
  const auto L = disk(0.8, h);
  const auto m = uniformizing_map(green_direct(L.domain, 0.0));
  const auto n = normalize_map(m);
  CHECK(n.normalized);
  CHECK(n.r == doctest::Approx(L.level).epsilon(10 * h * h));
  const auto twice = normalize_map(n);
  CHECK(std::abs(twice.phi.values[5] - n.phi.values[5]) <= 1e-12);

  const auto U = disk(1.0, h);
  const Point p(0.3, 0.0);
  const auto mp = normalize_map(uniformizing_map(green_direct(U.domain, p)));
  const double R = U.level;
  CHECK(mp.r == doctest::Approx((R * R - 0.09) / R).epsilon(20 * h * h));
}

TEST_CASE("conjugate of a doubled green function has the wrong period") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  auto g = green_direct(L.domain, 0.0);
  for (double& v : g.G.values) v *= 2.0;
  CHECK(code_of([&] { harmonic_conjugate(g); }) == ErrorCode::PeriodMismatch);
}

TEST_CASE("derivative radius") {
  const double h = 1.0 / 32;
  const auto L = disk(1.0, h);
  CHECK(derivative_radius(*L.domain, 0.0) == doctest::Approx(8 * h));
  CHECK(derivative_radius(*L.domain, Point(0.8, 0.0)) < 8 * h);
}

TEST_CASE("exhaustion of concentric disks") {
  const double h = 1.0 / 16;
  LevelSpec s{make_level_function("disk", {}), 1.0, 0.0, 1e-3};
  const std::vector<double> levels{1.0, 1.5, 2.0};
  const auto rep = run_exhaustion(s, levels, box(2.0 + 4 * h, h));
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.radius_monotone);
  for (const auto& lv : rep.levels) CHECK(lv.r == doctest::Approx(lv.level).epsilon(0.02));
  for (std::size_t n = 1; n < rep.levels.size(); ++n) CHECK(rep.levels[n].r > rep.levels[n - 1].r);

  const std::vector<double> one{1.0};
  CHECK(run_exhaustion(s, one, box(1.0 + 4 * h, h)).verdict == Verdict::Undecided);
}

TEST_CASE("conformal radius scales with the domain") {
  const double h = 1.0 / 32;
  const auto a = normalize_map(uniformizing_map(green_direct(square(0.5, h).domain, 0.0)));
  const auto b = normalize_map(uniformizing_map(green_direct(square(1.0, h).domain, 0.0)));
  CHECK(b.r / a.r == doctest::Approx(2.0).epsilon(0.02));
}
