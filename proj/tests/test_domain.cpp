#include <random>

#include "doctest.h"
#include "helpers.hpp"
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

std::vector<std::uint8_t> disk_mask(const GridGeometry& g, Point c, double r) {
  std::vector<std::uint8_t> m(g.node_count(), 0);
  for (std::size_t id = 0; id < m.size(); ++id) m[id] = std::abs(g.node_point(id) - c) < r;
  return m;
}

void punch(const GridGeometry& g, std::vector<std::uint8_t>& m, Point c, double r) {
  for (std::size_t id = 0; id < m.size(); ++id) {
    if (std::abs(g.node_point(id) - c) <= r) m[id] = 0;
  }
}

}  // namespace

TEST_CASE("circle level set crossings lie within h of the circle") {
  const double h = 1.0 / 64;
  const auto L = disk(1.0, h);
  double off = 0.0;
  for (const Crossing& c : L.domain->crossings()) off = std::max(off, std::abs(std::abs(c.point) - 1.0));
  CHECK(off <= h);
  CHECK(L.domain->crossings().size() > 0);
  for (const Crossing& c : L.domain->crossings()) {
    CHECK(c.theta > 0.0);
    CHECK(c.theta <= 1.0);
  }
}

TEST_CASE("basepoint outside the sublevel set is rejected") {
  CHECK(code_of([] { level("disk", {}, 1.0, Point(2.0, 0.0), box(2.5, 1.0 / 16)); }) == ErrorCode::BasepointOutside);
  // x^2 - y^2 at (-1, 0) is +1, above the level 0.
  CHECK(code_of([] { level("saddle", {}, 0.0, Point(-1.0, 0.0), box(2.0, 1.0 / 16)); }) == ErrorCode::BasepointOutside);
}

TEST_CASE("level through grid nodes is perturbed off them") {
  const double h = 1.0 / 16;
  const auto L = level("disk", {}, 0.5, 0.0, box(1.0, h));
  CHECK(L.perturbation_steps >= 1);
  CHECK(L.level > 0.5);
  CHECK(L.level < 0.5 + 100 * 1e-3 * h);
  const auto& g = L.domain->grid();
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    CHECK(std::abs(std::abs(g.node_point(id)) - L.level) >= 1e-3 * h * (1.0 - 1e-9));
  }
}

TEST_CASE("level set leaving the box is rejected") {
  CHECK(code_of([] { level("disk", {}, 1.0, 0.0, box(1.01, 1.0 / 16)); }) == ErrorCode::BoxTooSmall);
}

TEST_CASE("narrow neck is rejected") {
  CHECK(code_of([] {
          level("dumbbell", {{"neck", 0.02}}, 1.0, Point(-1.0, 0.0), GridGeometry::covering(-2.0, -1.0, 2.0, 1.0, 1.0 / 32));
        }) == ErrorCode::FeatureTooSmall);
}

TEST_CASE("connected component labels") {
  const auto g = box(1.2, 1.0 / 32);
  auto two = disk_mask(g, Point(0.5, 0.0), 0.3);
  const auto other = disk_mask(g, Point(-0.5, 0.0), 0.3);
  for (std::size_t i = 0; i < two.size(); ++i) two[i] |= other[i];
  CHECK(connected_components(g, two).interior_components == 2);

  auto ann = disk_mask(g, 0.0, 1.0);
  punch(g, ann, 0.0, 0.4);
  const auto la = connected_components(g, ann);
  CHECK(la.interior_components == 1);
  CHECK(la.exterior_components == 2);

  const auto lf = connected_components(g, std::vector<std::uint8_t>(g.node_count(), 1));
  CHECK(lf.interior_components == 1);
  CHECK(lf.exterior_components == 0);
}

TEST_CASE("labels are row-major first-seen and translation invariant") {
  const auto g = box(1.2, 1.0 / 32);
  auto m = disk_mask(g, Point(0.5, 0.2), 0.3);
  const auto other = disk_mask(g, Point(-0.5, -0.2), 0.3);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] |= other[i];
  const auto lab = connected_components(g, m);
  int first = -1;
  for (std::size_t id = 0; id < m.size() && first < 0; ++id) first = lab.interior_label[id];
  CHECK(first == 0);

  GridGeometry wide = g;
  wide.nx += 7;
  wide.ny += 2;
  std::vector<std::uint8_t> shifted(wide.node_count(), 0);
  for (std::size_t id = 0; id < m.size(); ++id) shifted[wide.id(g.col_of(id) + 7, g.row_of(id) + 2)] = m[id];
  const auto ls = connected_components(wide, shifted);
  CHECK(ls.interior_components == lab.interior_components);
  for (std::size_t id = 0; id < m.size(); ++id) {
    REQUIRE(ls.interior_label[wide.id(g.col_of(id) + 7, g.row_of(id) + 2)] == lab.interior_label[id]);
  }
}

TEST_CASE("euler characteristic and boundary loops") {
  const auto g = box(1.2, 1.0 / 32);
  auto m = disk_mask(g, 0.0, 1.0);
  const auto d = GridDomain::from_mask(g, m);
  CHECK(euler_characteristic(d) == 1);
  CHECK(boundary_component_count(d) == 1);

  auto ann = m;
  punch(g, ann, 0.0, 0.4);
  const auto a = GridDomain::from_mask(g, ann);
  CHECK(euler_characteristic(a) == 0);
  CHECK(boundary_component_count(a) == 2);

  auto holes = m;
  punch(g, holes, Point(0.4, 0.0), 0.15);
  punch(g, holes, Point(-0.4, 0.0), 0.15);
  const auto two = GridDomain::from_mask(g, holes);
  CHECK(euler_characteristic(two) == -1);
  CHECK(boundary_component_count(two) == 3);
  const auto filled = fill_holes(two, Point(0.0, 0.5));
  CHECK(boundary_component_count(filled) == 1);
  CHECK(euler_characteristic(filled) == 1);
}

TEST_CASE("filling an annulus gives the disk") {
  const double h = 1.0 / 32;
  const auto g = box(1.0 + 4.0 * h, h);
  const auto ring = level("ring", {{"radius", 0.7}}, 0.3, Point(0.7, 0.0), g);
  const auto full = level("disk", {}, 1.0, 0.0, g);
  const auto filled = fill_holes(*ring.domain, Point(0.7, 0.0));
  CHECK(boundary_component_count(filled) == 1);
  CHECK(euler_characteristic(filled) == 1);
  // The filled ring and the disk differ at most by nodes within the perturbation.
  const auto a = filled.interior_mask(), b = full.domain->interior_mask();
  int diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  CHECK(diff <= 8);
}

TEST_CASE("simply connected input is unchanged by hole filling") {
  const auto L = disk(1.0, 1.0 / 32);
  const auto filled = fill_holes(*L.domain, 0.0);
  CHECK(filled.interior_mask() == L.domain->interior_mask());
}

TEST_CASE("hole filling is idempotent with chi one on random masks") {
  const double h = 1.0 / 32;
  const auto g = box(1.1, h);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int c = 0; c < 20; ++c) {
    auto m = disk_mask(g, 0.0, 1.0);
    const int holes = 1 + c % 4;
    for (int k = 0; k < holes; ++k) {
      punch(g, m, std::polar(0.8 * U(rng), 2.0 * kPi * U(rng)), h * (1.0 + 3.0 * U(rng)));
    }
    const auto d = GridDomain::from_mask(g, m);
    const Point base = d.point(d.interior_count() / 2);
    const auto once = fill_holes(d, base);
    const auto twice = fill_holes(once, base);
    CHECK(once.interior_mask() == twice.interior_mask());
    CHECK(euler_characteristic(once) == 1);
    CHECK(boundary_component_count(once) == 1);
  }
}

TEST_CASE("exhaustion levels are nested and simply connected") {
  const double h = 1.0 / 16;
  const auto g = box(3.0 + 4.0 * h, h);
  LevelSpec s{make_level_function("disk", {}), 1.0, 0.0, 1e-3};
  const std::vector<double> levels{1.0, 2.0, 3.0};
  const auto ex = build_exhaustion(s, levels, g);
  REQUIRE(ex.size() == 3);
  for (std::size_t n = 0; n < ex.size(); ++n) {
    CHECK(euler_characteristic(*ex[n].domain) == 1);
    CHECK(boundary_component_count(*ex[n].domain) == 1);
    if (n > 0) CHECK(ex[n - 1].domain->subset_of(*ex[n].domain));
  }
}

TEST_CASE("a bump that makes the sublevel set an annulus is filled") {
  const double h = 1.0 / 32;
  LevelSpec s{make_level_function("annulus_bump", {}), 1.0, Point(0.5, 0.0), 1e-3};
  const auto raw = from_level_set({s.g, 0.8, s.basepoint, 1e-3}, box(2.0 + 4.0 * h, h));
  CHECK(boundary_component_count(*raw.domain) == 2);
  const std::vector<double> levels{0.8, 1.5};
  const auto ex = build_exhaustion(s, levels, box(2.0 + 4.0 * h, h));
  CHECK(boundary_component_count(*ex[0].domain) == 1);
  CHECK(euler_characteristic(*ex[0].domain) == 1);
}

TEST_CASE("non increasing levels are a nesting violation") {
  LevelSpec s{make_level_function("disk", {}), 1.0, 0.0, 1e-3};
  const std::vector<double> bad{2.0, 1.0};
  CHECK(code_of([&] { build_exhaustion(s, bad, box(2.5, 1.0 / 16)); }) == ErrorCode::NestingViolation);
}

TEST_CASE("sublevel sets grow with the level") {
  const double h = 1.0 / 32;
  const auto g = box(2.0, h);
  for (double a : {0.5, 0.9, 1.3}) {
    const auto lo = level("kidney", {}, a, 0.0, g);
    const auto hi = level("kidney", {}, a + 0.2, 0.0, g);
    CHECK(lo.domain->subset_of(*hi.domain));
  }
}

TEST_CASE("every interior node has four arms") {
  const auto L = level("kidney", {}, 1.0, 0.0, box(1.4, 1.0 / 32));
  const GridDomain& d = *L.domain;
  std::size_t with_crossing = 0;
  for (std::size_t k = 0; k < d.interior_count(); ++k) {
    for (const Arm& a : d.arms(k)) {
      const bool ok = a.neighbor >= 0 || a.crossing >= 0;
      REQUIRE(ok);
      with_crossing += a.crossing >= 0;
    }
  }
  CHECK(with_crossing == d.crossings().size());
  std::size_t on_loops = 0;
  for (const auto& loop : d.loops()) on_loops += loop.crossings.size();
  CHECK(on_loops == d.crossings().size());
}
