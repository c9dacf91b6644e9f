#pragma once

#include <array>
#include <string>

#include "json.hpp"
#include "uniformize/domain.hpp"
#include "uniformize/oracle.hpp"

namespace uniformize {

/// {"level": {"expr", "params"}, "a", "x0": [x, y], "h", "box": [xmin, ymin, xmax, ymax]}
struct DomainSpec {
  std::string expr;
  nlohmann::json params = nlohmann::json::object();
  double a = 0.0;
  Point x0;
  double h = 0.0;
  std::array<double, 4> box{};
  double eps_reg = 1e-3;
};

DomainSpec parse_domain_spec(const nlohmann::json& j);

LevelSpec level_spec(const DomainSpec& spec);
GridGeometry grid_of(const DomainSpec& spec);
LevelSetDomain build_domain(const DomainSpec& spec);

struct BoundaryFunction {
  RealFn f;
  bool harmonic = true;  // f itself solves the Dirichlet problem
};

/// re_z, im_z, constant {value}, x2_minus_y2, exp_re, log_distance {center}.
BoundaryFunction boundary_function(const std::string& name, const nlohmann::json& params);

}  // namespace uniformize
