#include "uniformize/oracle.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uniformize/error.hpp"
#include "uniformize/stencil.hpp"

namespace uniformize {

DenseResult dense_laplace(DomainPtr domain, std::span<const double> boundary_values) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "null domain");
  const GridDomain& dom = *domain;
  const std::size_t n = dom.interior_count();
  if (n > kDenseMaxUnknowns) {
    throw Error(ErrorCode::SizeExceeded, "direct solver limited to " + std::to_string(kDenseMaxUnknowns) +
                                             " unknowns, got " + std::to_string(n));
  }
  if (boundary_values.size() != dom.crossings().size()) {
    throw Error(ErrorCode::InvalidArgument, "boundary data size does not match crossing count");
  }
  const Stencil st(dom);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(5 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const StencilRow& r = st.row(k);
    const auto row = static_cast<Eigen::Index>(k);
    entries.emplace_back(row, row, 1.0);
    for (int q = 0; q < 4; ++q) {
      if (r.neighbor[q] >= 0) entries.emplace_back(row, static_cast<Eigen::Index>(r.neighbor[q]), -r.weight[q]);
      else rhs[row] += r.weight[q] * boundary_values[r.crossing[q]];
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSystem, "sparse factorization failed: " + lu.lastErrorMessage());
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "sparse solve failed");

  DenseResult out;
  out.solution = GridFunction(domain);
  out.solution.boundary.assign(boundary_values.begin(), boundary_values.end());
  out.solution.values.assign(x.data(), x.data() + x.size());
  const auto& u = out.solution.values;
  for (std::size_t k = 0; k < n; ++k) {
    out.rhs_norm = std::max(out.rhs_norm, std::abs(rhs[k]));
    double au = u[k];
    const StencilRow& r = st.row(k);
    for (int q = 0; q < 4; ++q) {
      if (r.neighbor[q] >= 0) au -= r.weight[q] * u[r.neighbor[q]];
    }
    out.residual = std::max(out.residual, std::abs(au - rhs[k]));
  }
  return out;
}

namespace {

constexpr int kAdmissionPoints = 1000;

// Circle mean minus centre value, spectrally accurate for functions harmonic
// on a neighbourhood of the closed disk.
double circle_defect(const RealFn& f, Point z, double r) {
  constexpr int m = 64;
  double s = 0.0;
  for (int k = 0; k < m; ++k) s += f(z + std::polar(r, 2.0 * std::numbers::pi * k / m));
  return s / m - f(z);
}

Point random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double r = radius * std::sqrt(U(rng));
  return std::polar(r, 2.0 * std::numbers::pi * U(rng));
}

}  // namespace

AdmissionReport admit_mobius_green(Point p, std::uint64_t seed) {
  AdmissionReport rep;
  if (!(std::abs(p) <= 0.7)) {
    rep.pass = false;
    rep.detail = "pole outside |p| <= 0.7";
    return rep;
  }
  const RealFn g = [p](Point z) { return -std::log(std::abs((z - p) / (1.0 - std::conj(p) * z))); };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < kAdmissionPoints; ++t) {
    Point z = random_in_disk(rng, 0.97);
    const double d = std::min(std::abs(z - p), 1.0 - std::abs(z));
    if (d < 1e-3) continue;
    const double r = 0.5 * d;
    rep.max_laplacian = std::max(rep.max_laplacian, std::abs(circle_defect(g, z, r)) / std::max(1.0, std::abs(g(z))));
    const Point w = std::polar(1.0, 2.0 * std::numbers::pi * U(rng));
    rep.max_boundary = std::max(rep.max_boundary, std::abs(g(w)));
  }
  constexpr double eps = 1e-6;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < 16; ++k) {
    const double v = g(p + std::polar(eps, 2.0 * std::numbers::pi * k / 16)) + std::log(eps);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.pole_spread = hi - lo;
  rep.pass = rep.max_laplacian <= 1e-12 && rep.max_boundary <= 1e-12 && std::isfinite(lo) && rep.pole_spread <= 1e-4;
  if (!rep.pass) rep.detail = "Moebius Green admission failed";
  return rep;
}

RealFn mobius_green(Point p) {
  const auto rep = admit_mobius_green(p);
  if (!rep.pass) throw Error(ErrorCode::InvalidArgument, rep.detail);
  return [p](Point z) { return -std::log(std::abs((z - p) / (1.0 - std::conj(p) * z))); };
}

AdmissionReport admit_cayley(std::uint64_t seed) {
  const ComplexFn c = [](Point z) { return (z - Point(0, 1)) / (z + Point(0, 1)); };
  AdmissionReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-4.0, 4.0), V(1e-2, 4.0);
  bool inside = true;
  for (int t = 0; t < kAdmissionPoints; ++t) {
    const Point z(U(rng), V(rng));
    if (!(std::abs(c(z)) < 1.0)) inside = false;
    const double r = 0.5 * z.imag();
    const RealFn re = [&](Point x) { return c(x).real(); };
    const RealFn im = [&](Point x) { return c(x).imag(); };
    rep.max_laplacian = std::max({rep.max_laplacian, std::abs(circle_defect(re, z, r)), std::abs(circle_defect(im, z, r))});
    rep.max_boundary = std::max(rep.max_boundary, std::abs(std::abs(c(Point(U(rng), 0.0))) - 1.0));
  }
  const bool fixed = std::abs(c(Point(0, 1))) == 0.0 && std::abs(c(0.0) + 1.0) < 1e-15;
  rep.pass = inside && fixed && rep.max_laplacian <= 1e-12 && rep.max_boundary <= 1e-12;
  if (!rep.pass) rep.detail = "Cayley admission failed";
  return rep;
}

ComplexFn cayley() {
  const auto rep = admit_cayley();
  if (!rep.pass) throw Error(ErrorCode::InvalidArgument, rep.detail);
  return [](Point z) { return (z - Point(0, 1)) / (z + Point(0, 1)); };
}

const std::vector<AnalyticCase>& analytic_cases() {
  static const std::vector<AnalyticCase> cases = [] {
    std::vector<AnalyticCase> v;
    auto mobius_case = [](std::string name, Point p) {
      AnalyticCase c;
      c.name = std::move(name);
      c.description = "unit disk, Green function and disk automorphism";
      c.pole = p;
      c.green = [p](Point z) { return -std::log(std::abs((z - p) / (1.0 - std::conj(p) * z))); };
      c.map = [p](Point z) { return (z - p) / (1.0 - std::conj(p) * z); };
      c.admit = [p] { return admit_mobius_green(p); };
      return c;
    };
    v.push_back(mobius_case("disk_center", 0.0));
    v.push_back(mobius_case("disk_mobius_0.3", 0.3));
    v.push_back(mobius_case("disk_mobius_complex", Point(-0.2, 0.35)));
    AnalyticCase hp;
    hp.name = "halfplane_cayley";
    hp.description = "upper half-plane, pole i, Cayley transform";
    hp.pole = Point(0, 1);
    hp.green = [](Point z) { return -std::log(std::abs((z - Point(0, 1)) / (z + Point(0, 1)))); };
    hp.map = [](Point z) { return (z - Point(0, 1)) / (z + Point(0, 1)); };
    hp.admit = [] { return admit_cayley(); };
    v.push_back(std::move(hp));
    return v;
  }();
  return cases;
}

}  // namespace uniformize
