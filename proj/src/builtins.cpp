#include "uniformize/builtins.hpp"

#include <algorithm>
#include <cmath>

#include "uniformize/error.hpp"

namespace uniformize {

namespace {

Point point_param(const nlohmann::json& params, const char* key, Point fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double real_param(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number()) {
    throw Error(ErrorCode::Parse, std::string("parameter '") + key + "' must be a number");
  }
  return params.at(key).get<double>();
}

LevelFunction sampled_level(const nlohmann::json& params) {
  const Point origin = point_param(params, "origin", {0.0, 0.0});
  const double h = real_param(params, "h", 0.0);
  const int nx = params.value("nx", 0);
  const int ny = params.value("ny", 0);
  if (!(h > 0.0) || nx < 1 || ny < 1 || !params.contains("values")) {
    throw Error(ErrorCode::Parse, "custom-sampled needs origin, h, nx, ny and values");
  }
  auto values = params.at("values").get<std::vector<double>>();
  if (values.size() != static_cast<std::size_t>(nx + 1) * (ny + 1)) {
    throw Error(ErrorCode::Parse, "custom-sampled values must have (nx+1)*(ny+1) entries");
  }
  const double outside = *std::max_element(values.begin(), values.end()) + 1.0;
  return [=](Point p) {
    const Point q = (p - origin) / h;
    const double fx = q.real(), fy = q.imag();
    if (fx < 0.0 || fy < 0.0 || fx > nx || fy > ny) return outside;
    const int i = std::min(static_cast<int>(fx), nx - 1);
    const int j = std::min(static_cast<int>(fy), ny - 1);
    const double tx = fx - i, ty = fy - j;
    auto at = [&](int a, int b) { return values[static_cast<std::size_t>(b) * (nx + 1) + a]; };
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
           tx * ty * at(i + 1, j + 1);
  };
}

}  // namespace

std::vector<std::string> builtin_level_names() {
  return {"disk", "square", "ring", "kidney", "dumbbell", "annulus_bump", "saddle", "halfplane_cap",
          "custom-sampled"};
}

LevelFunction make_level_function(const std::string& expr, const nlohmann::json& params) {
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  if (!p.is_object()) throw Error(ErrorCode::Parse, "level params must be an object");
  const Point c = point_param(p, "center", {0.0, 0.0});

  if (expr == "disk") {
    return [c](Point z) { return std::abs(z - c); };
  }
  if (expr == "square") {
    return [c](Point z) { return std::max(std::abs(z.real() - c.real()), std::abs(z.imag() - c.imag())); };
  }
  if (expr == "ring") {
    // | |z - c| - r0 |; the sublevel set at level w is the annulus r0 - w < |z - c| < r0 + w.
    const double r0 = real_param(p, "radius", 0.75);
    return [c, r0](Point z) { return std::abs(std::abs(z - c) - r0); };
  }
  if (expr == "kidney") {
    // Star-shaped bean: r(t) = 1 + 0.3 cos t - 0.15 cos 2t, concave near t = pi.
    const double b = real_param(p, "b", 0.3);
    const double cc = real_param(p, "c", 0.15);
    return [c, b, cc](Point z) {
      const Point w = z - c;
      const double r = std::abs(w);
      if (r == 0.0) return 0.0;
      const double t = std::arg(w);
      return r / (1.0 + b * std::cos(t) - cc * std::cos(2.0 * t));
    };
  }
  if (expr == "dumbbell") {
    const double sep = real_param(p, "sep", 1.0);
    const double radius = real_param(p, "radius", 0.6);
    const double neck = real_param(p, "neck", 0.2);
    if (!(neck > 0.0) || !(radius > 0.0) || !(sep > 0.0)) {
      throw Error(ErrorCode::Parse, "dumbbell parameters must be positive");
    }
    return [=](Point z) {
      const Point w = z - c;
      const double lobes = std::min(std::abs(w - sep), std::abs(w + sep)) / radius;
      const double bar = std::max(std::abs(w.real()) / sep, std::abs(w.imag()) / neck);
      return std::min(lobes, bar);
    };
  }
  if (expr == "annulus_bump") {
    const double amp = real_param(p, "amp", 1.0);
    const double width = real_param(p, "width", 0.3);
    return [=](Point z) {
      const Point w = z - c;
      return std::abs(w) + amp * std::exp(-std::norm(w) / (width * width));
    };
  }
  if (expr == "saddle") {
    const double sign = real_param(p, "sign", 1.0);
    return [c, sign](Point z) {
      const Point w = z - c;
      return sign * (w.real() * w.real() - w.imag() * w.imag());
    };
  }
  if (expr == "halfplane_cap") {
    // Caps of the upper half-plane: {|z| <= a, Im z >= (1 - a) / kappa}.
    const double kappa = real_param(p, "kappa", 1e5);
    return [kappa](Point z) { return std::max(std::abs(z), 1.0 - kappa * z.imag()); };
  }
  if (expr == "custom-sampled") return sampled_level(p);
  throw Error(ErrorCode::Parse, "unknown level expression '" + expr + "'");
}

}  // namespace uniformize
