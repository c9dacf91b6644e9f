#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uniformize/harmonic.hpp"

namespace uniformize {

enum class GreenRoute { Direct, Perron };

const char* to_string(GreenRoute route);

/// G(z) = -log|z - x0| + H(z), zero on the boundary.
struct GreenResult {
  GridFunction G;  // punctured at the pole node when x0 sits on a node
  GridFunction H;  // regular part, defined at the pole node too
  Point pole;
  std::optional<std::size_t> pole_node;
  GreenRoute route = GreenRoute::Direct;
  // Perron route only.
  double A = 0.0;
  double B = 0.0;
  double a = 0.0;
  double chart_radius = 0.0;
  int sweeps = 0;
  std::size_t cap_activations = 0;
  double residual = 0.0;
  double min_G = 0.0;
};

struct GreenDirectOptions {
  std::optional<DirichletMethod> method;  // default: DIRECT when small enough, else SOR
  SorOptions sor;
};

/// Decomposition route: H solves the Dirichlet problem with data log|p - x0|.
GreenResult green_direct(DomainPtr domain, Point x0, const GreenDirectOptions& opt = {});

struct GreenPerronOptions {
  double chart_radius = 0.0;  // 0: half the pole clearance
  double A0 = 1.0;
  PerronConfig perron;
  std::optional<DirichletMethod> h1_method;
};

/// Barrier route: monotone iteration from the seed max(-log|xi|, 0) under
/// the cap min(B h1, A - log|xi|), xi = (z - x0) / rho.
GreenResult green_perron(DomainPtr domain, Point x0, const GreenPerronOptions& opt = {});

/// Interior node within 1e-9 h of p, if any.
std::optional<std::size_t> pole_node_of(const GridDomain& domain, Point p);

// --- line integrals -------------------------------------------------------------

/// Polyline; closed when the last vertex repeats the first.
struct Loop {
  std::vector<Point> vertices;

  bool closed() const { return vertices.size() > 2 && vertices.front() == vertices.back(); }
};

/// Counter-clockwise circle traversed `turns` times, vertex spacing <= h / 2.
Loop circle_loop(Point center, double radius, double h, int turns = 1);

/// Trapezoid integral of u_x dy - u_y dx along the loop, with node gradients
/// interpolated bilinearly. Vertices need clearance >= 2h from the boundary
/// and from the puncture.
double flux(const GridFunction& u, const Loop& loop);

/// 1e-2 at h = 1/128, proportional to h^2.
double default_tol_flux(double h);

struct RemovabilityReport {
  bool pass = false;
  bool flux_pass = false;
  bool deviation_pass = false;
  double flux = 0.0;
  double tol_flux = 0.0;
  double deviation = 0.0;
  double tol_deviation = 0.0;
  double loop_radius = 0.0;
  std::string detail;
  std::optional<GridFunction> extension;
};

/// Flux around p, then the Dirichlet extension across p (holes filled,
/// puncture ignored) compared with u.
RemovabilityReport removability_test(const GridFunction& u, Point p, double tol_flux = 0.0);

}  // namespace uniformize
