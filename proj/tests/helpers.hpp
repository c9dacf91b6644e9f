#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "uniformize/builtins.hpp"
#include "uniformize/domain.hpp"

namespace testing_support {

using uniformize::Point;
using C = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline uniformize::GridGeometry box(double half, double h) {
  return uniformize::GridGeometry::covering(-half, -half, half, half, h);
}

inline uniformize::LevelSetDomain level(const std::string& expr, const nlohmann::json& params, double a, Point x0,
                                        const uniformize::GridGeometry& g) {
  return uniformize::from_level_set({uniformize::make_level_function(expr, params), a, x0, 1e-3}, g);
}

inline uniformize::LevelSetDomain disk(double radius, double h) {
  return level("disk", {}, radius, 0.0, box(radius + 4.0 * h, h));
}

inline uniformize::LevelSetDomain square(double half, double h) {
  return level("square", {}, half, 0.0, box(half + 4.0 * h, h));
}

inline std::vector<double> trace(const uniformize::GridDomain& d, const std::function<double(Point)>& f) {
  std::vector<double> v;
  for (const auto& c : d.crossings()) v.push_back(f(c.point));
  return v;
}

// Green function and map of the disk |z| < R with pole p.
inline double disk_green(Point z, Point p, double R) {
  return -std::log(std::abs(R * (z - p) / (R * R - std::conj(p) * z)));
}
inline C disk_map(Point z, Point p, double R) { return R * (z - p) / (R * R - std::conj(p) * z); }

}  // namespace testing_support
