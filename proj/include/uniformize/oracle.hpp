#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uniformize/grid_function.hpp"

namespace uniformize {

inline constexpr std::size_t kDenseMaxUnknowns = 160 * 160;

struct DenseResult {
  GridFunction solution;
  double residual = 0.0;   // ||A u - b||_inf
  double rhs_norm = 0.0;   // ||b||_inf
};

/// Assembles the Shortley-Weller system and solves it by sparse LU.
DenseResult dense_laplace(DomainPtr domain, std::span<const double> boundary_values);

using RealFn = std::function<double(Point)>;
using ComplexFn = std::function<std::complex<double>(Point)>;

struct AdmissionReport {
  bool pass = true;
  double max_laplacian = 0.0;     // |5-point Laplacian| / scale, small stencil
  double max_boundary = 0.0;      // |value| on the zero set
  double pole_spread = 0.0;       // angular spread of G + log eps near the pole
  std::string detail;
};

/// -log|(z - p)/(1 - conj(p) z)|. Throws when |p| > 0.7 or admission fails.
RealFn mobius_green(Point p);
AdmissionReport admit_mobius_green(Point p, std::uint64_t seed = 1);

/// (z - i)/(z + i).
ComplexFn cayley();
AdmissionReport admit_cayley(std::uint64_t seed = 1);

struct AnalyticCase {
  std::string name;
  std::string description;
  Point pole;
  RealFn green;          // exact Green function, pole at `pole`
  ComplexFn map;         // exact normalised map up to rotation, may be empty
  std::function<AdmissionReport()> admit;
};

/// All registered cases, admission checks not yet run.
const std::vector<AnalyticCase>& analytic_cases();

}  // namespace uniformize
