#include "uniformize/config.hpp"

#include <cmath>

#include "uniformize/builtins.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

namespace {

Point point_of(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::Parse, std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_of(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorCode::Parse, std::string("missing number '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

DomainSpec parse_domain_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "domain spec must be an object");
  DomainSpec s;
  if (!j.contains("level") || !j["level"].is_object() || !j["level"].contains("expr") ||
      !j["level"]["expr"].is_string()) {
    throw Error(ErrorCode::Parse, "domain spec needs level.expr");
  }
  s.expr = j["level"]["expr"].get<std::string>();
  if (j["level"].contains("params")) s.params = j["level"]["params"];
  s.a = number_of(j, "a");
  if (!j.contains("x0")) throw Error(ErrorCode::Parse, "domain spec needs x0");
  s.x0 = point_of(j["x0"], "x0");
  s.h = number_of(j, "h");
  if (!j.contains("box") || !j["box"].is_array() || j["box"].size() != 4) {
    throw Error(ErrorCode::Parse, "box must be [xmin, ymin, xmax, ymax]");
  }
  for (int i = 0; i < 4; ++i) {
    if (!j["box"][i].is_number()) throw Error(ErrorCode::Parse, "box entries must be numbers");
    s.box[i] = j["box"][i].get<double>();
  }
  if (j.contains("eps_reg")) s.eps_reg = number_of(j, "eps_reg");
  if (!(s.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  if (!(s.box[2] > s.box[0] && s.box[3] > s.box[1])) throw Error(ErrorCode::InvalidArgument, "empty box");
  return s;
}

LevelSpec level_spec(const DomainSpec& spec) {
  LevelSpec l;
  l.g = make_level_function(spec.expr, spec.params);
  l.level = spec.a;
  l.basepoint = spec.x0;
  l.eps_reg = spec.eps_reg;
  return l;
}

GridGeometry grid_of(const DomainSpec& spec) {
  return GridGeometry::covering(spec.box[0], spec.box[1], spec.box[2], spec.box[3], spec.h);
}

LevelSetDomain build_domain(const DomainSpec& spec) { return from_level_set(level_spec(spec), grid_of(spec)); }

BoundaryFunction boundary_function(const std::string& name, const nlohmann::json& params) {
  if (name == "re_z") return {[](Point z) { return z.real(); }};
  if (name == "im_z") return {[](Point z) { return z.imag(); }};
  if (name == "constant") {
    const double c = params.value("value", 1.0);
    return {[c](Point) { return c; }};
  }
  if (name == "x2_minus_y2") return {[](Point z) { return (z * z).real(); }};
  if (name == "exp_re") return {[](Point z) { return std::exp(z).real(); }};
  if (name == "log_distance") {
    Point c(3.0, 0.0);
    if (params.contains("center")) c = point_of(params["center"], "center");
    return {[c](Point z) { return std::log(std::abs(z - c)); }};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown boundary function '" + name + "'");
}

}  // namespace uniformize
