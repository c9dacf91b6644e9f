#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uniformize/green.hpp"

namespace uniformize {

/// Branch-tracked conjugate of G: F(z) = integral of G_x dy - G_y dx from z0.
struct ConjugateField {
  GridFunction F;  // punctured at the pole node
  Point basepoint;
  double period = 0.0;           // flux of G around the pole
  double period_radius = 0.0;
  double max_loop_defect = 0.0;  // over fundamental loops, mod 2 pi
  std::size_t loops_checked = 0;
};

struct ConjugateOptions {
  std::optional<Point> basepoint;  // default: halfway from the pole to the boundary, eastwards
  double tol_flux = 0.0;           // 0: default_tol_flux(h)
};

/// Throws PeriodMismatch when the period differs from -2 pi by more than
/// tol_flux or a fundamental loop fails to close mod 2 pi.
ConjugateField harmonic_conjugate(const GreenResult& green, const ConjugateOptions& opt = {});

struct MapDiagnostics {
  double cr_residual = 0.0;
  double boundary_modulus_min = 0.0;  // |phi| over nodes next to the boundary
  double boundary_modulus_max = 0.0;
  double max_modulus = 0.0;
  std::vector<int> degree_samples;    // windings at a few targets
};

struct MapResult {
  ComplexField phi;
  Point pole;
  std::optional<std::size_t> pole_node;
  std::complex<double> d{1.0, 0.0};  // derivative of phi at the pole
  double r = 1.0;                    // conformal radius 1/|d| of the raw map
  double image_radius = 1.0;         // phi maps into image_radius * unit disk
  bool normalized = false;
  double period = 0.0;
  MapDiagnostics diagnostics;
};

/// phi = exp(-G - iF), phi(pole) = 0.
MapResult assemble_map(const GreenResult& green, const ConjugateField& conj);

/// Convenience: conjugate plus assembly plus diagnostics.
MapResult uniformizing_map(const GreenResult& green, const ConjugateOptions& opt = {});

/// max |dphi/dx + i dphi/dy| by centred differences over nodes with four
/// interior neighbours and clearance >= min_clearance.
double cr_residual(const ComplexField& phi, double min_clearance = 0.0);

/// Contour average (1/2pi) * integral of phi(x0 + rho e^it) / (rho e^it) dt.
std::complex<double> derivative_at(const ComplexField& phi, Point x0, double rho, int samples = 64);

/// rho = min(8h, clearance / 2).
double derivative_radius(const GridDomain& domain, Point x0);

struct WindingResult {
  int count = 0;
  double residual = 0.0;
  double raw = 0.0;
};

/// Accumulated argument of phi - w along the loop over 2 pi.
WindingResult winding_count(const ComplexField& phi, const Loop& loop, std::complex<double> w);

/// Outer boundary loop of the domain eroded to clearance >= depth * h; runs
/// counter-clockwise through lattice nodes.
Loop boundary_contour(const GridDomain& domain, double depth = 3.0);

struct InjectivityReport {
  bool pass = false;
  std::vector<std::complex<double>> targets;
  std::vector<int> windings;
  double min_distance = 0.0;
  double threshold = 0.0;
  std::size_t nodes_sampled = 0;
};

InjectivityReport injectivity_scan(const MapResult& map, int sample_count, std::uint64_t seed);

/// Divides by the derivative at the pole.
MapResult normalize_map(const MapResult& map);

/// Best rotation theta with psi ~ e^{i theta} phi over nodes with clearance
/// >= min_clearance; returns sup |e^{i theta} phi - psi| there.
double aligned_difference(const ComplexField& phi, const std::function<std::complex<double>(Point)>& psi,
                          double min_clearance, double* theta = nullptr);

// --- exhaustion ------------------------------------------------------------------

enum class Verdict { Converged, DivergentRadius, Undecided };
const char* to_string(Verdict v);

struct ExhaustionConfig {
  std::optional<Point> pole;  // default: the level spec basepoint
  double tol_conv = 5e-3;
  double divergence_ratio = 1.5;
  int sample_stride = 0;      // 0: about 32 samples per side of K0
};

struct ExhaustionLevel {
  double level = 0.0;
  double r = 0.0;
  double delta = 0.0;  // vs the previous level, 0 for the first
  int sweeps = 0;
  std::size_t nodes = 0;
  int perturbation_steps = 0;
  std::vector<std::complex<double>> snapshot;  // normalised map on the K0 samples
};

struct ExhaustionReport {
  std::vector<ExhaustionLevel> levels;
  std::vector<Point> samples;
  Verdict verdict = Verdict::Undecided;
  bool radius_monotone = true;
  MapResult final_map;  // normalised map of the last level
};

ExhaustionReport run_exhaustion(const LevelSpec& spec, std::span<const double> levels, const GridGeometry& grid,
                                const ExhaustionConfig& cfg = {});

}  // namespace uniformize
