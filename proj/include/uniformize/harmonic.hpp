#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uniformize/grid_function.hpp"

namespace uniformize {

/// Round Euclidean disk with M uniform circle samples.
struct DiskSpec {
  Point center;
  double radius = 0.0;
  int samples = 64;
};

/// Trapezoidal Poisson integral on the unit disk from M samples at angles
/// 2*pi*k/M. Requires |z| <= 1 - 1e-6.
double poisson_extend(std::span<const double> boundary_samples, Point z);

/// Circle average (bilinear samples, trapezoid) minus the centre value.
double mean_value_deficit(const GridFunction& u, const DiskSpec& disk);

struct SubharmonicReport {
  bool pass = true;
  double min_deficit = 0.0;
  DiskSpec argmin;
  double tolerance = 0.0;
  std::size_t disks_checked = 0;
};

/// Sweeps disks of the given radii centred at every interior node whose
/// disk fits; PASS iff min deficit >= -tol (default 10 h^2).
SubharmonicReport check_subharmonic(const GridFunction& u, std::span<const double> radii,
                                    double tol = -1.0, int samples = 64);

/// u outside the disk, Poisson extension of u's circle samples inside.
GridFunction harmonic_replacement(const GridFunction& u, const DiskSpec& disk);

enum class DirichletMethod { Sor, Direct };

struct SorOptions {
  double tol = 1e-12;     // on max |stencil average - u|
  int max_iterations = 200000;
  double omega = 0.0;     // 0: optimal for the interior bounding rectangle
  int threads = 0;        // 0: UNIFORMIZE_THREADS or 1
};

struct DirichletResult {
  GridFunction solution;
  int iterations = 0;
  double residual = 0.0;
  double omega = 0.0;
};

/// Shortley-Weller Dirichlet problem. SOR uses red-black ordering; DIRECT is
/// sparse LU and is limited in size.
DirichletResult solve_dirichlet(DomainPtr domain, std::span<const double> boundary_values,
                                DirichletMethod method = DirichletMethod::Sor, const SorOptions& options = {},
                                std::span<const double> initial = {});

/// Worker count from UNIFORMIZE_THREADS (default 1).
int configured_threads();

struct PerronConfig {
  std::vector<double> radii;       // descending; empty means (8h, 4h, 2h, h)
  int passes_per_radius = 4;
  double tol_iter = 1e-9;
  int max_sweeps = 400000;
  double monotonicity_slack = 1e-12;
  bool check_seed = true;
};

struct PerronResult {
  GridFunction solution;
  int sweeps = 0;                 // coarse passes plus fine sweeps
  std::size_t disk_replacements = 0;
  double min_increment = 0.0;     // most negative node change over all sweeps
  double last_change = 0.0;
  std::size_t cap_activations = 0;
  std::optional<double> pole_regular_value;  // regular part at the pole node
};

/// Monotone Perron iteration from a subharmonic seed below the boundary data.
PerronResult perron_solve(std::span<const double> boundary_values, const GridFunction& seed,
                          const PerronConfig& cfg = {});

/// Optional structure for the pole-aware Perron iteration used by the
/// barrier construction of Green functions. Nodes flagged in `regular_form`
/// relax u - singular instead of u; the pole node carries only its regular
/// value. `cap` bounds every node from above after each sweep.
struct PerronSingularity {
  std::vector<double> singular;             // per interior node (pole entry unused)
  std::vector<double> singular_boundary;    // per crossing
  std::vector<std::uint8_t> regular_form;
  std::optional<std::size_t> pole;
  double pole_seed = 0.0;                   // initial regular value at the pole
  std::vector<double> cap;                  // empty: no cap
};

PerronResult perron_iterate(std::span<const double> boundary_values, const GridFunction& seed,
                            const PerronConfig& cfg, const PerronSingularity* singularity);

}  // namespace uniformize
