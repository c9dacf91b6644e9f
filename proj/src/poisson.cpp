#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "uniformize/error.hpp"
#include "uniformize/harmonic.hpp"

namespace uniformize {

namespace {

std::vector<double> circle_samples(const GridFunction& u, const DiskSpec& disk) {
  if (disk.samples < 4 || !(disk.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "disk needs a positive radius and at least 4 samples");
  }
  std::vector<double> out(static_cast<std::size_t>(disk.samples));
  for (int k = 0; k < disk.samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / disk.samples;
    const auto v = u.interpolate(disk.center + std::polar(disk.radius, t));
    if (!v) throw Error(ErrorCode::DiskNotContained, "circle sample outside the domain");
    out[k] = *v;
  }
  return out;
}

}  // namespace

double poisson_extend(std::span<const double> boundary_samples, Point z) {
  const std::size_t m = boundary_samples.size();
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "no boundary samples");
  if (!(std::abs(z) <= 1.0 - 1e-6)) {
    throw Error(ErrorCode::InvalidArgument, "Poisson extension needs |z| <= 1 - 1e-6");
  }
  const double radial = 1.0 - std::norm(z);
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    sum += boundary_samples[k] * radial / std::norm(std::polar(1.0, t) - z);
  }
  return sum / static_cast<double>(m);
}

double mean_value_deficit(const GridFunction& u, const DiskSpec& disk) {
  const auto samples = circle_samples(u, disk);
  const auto centre = u.interpolate(disk.center);
  if (!centre) throw Error(ErrorCode::DiskNotContained, "disk centre outside the domain");
  double mean = 0.0;
  for (double v : samples) mean += v;
  return mean / static_cast<double>(samples.size()) - *centre;
}

SubharmonicReport check_subharmonic(const GridFunction& u, std::span<const double> radii, double tol,
                                    int samples) {
  const double h = u.domain->h();
  SubharmonicReport report;
  report.tolerance = tol >= 0.0 ? tol : 10.0 * h * h;
  report.min_deficit = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    if (r < 2.0 * h * (1.0 - 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "subharmonicity radii must be at least 2h");
    }
  }
  std::vector<double> buf(static_cast<std::size_t>(samples));
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (!u.available(static_cast<std::ptrdiff_t>(k))) continue;
    const Point c = u.domain->point(k);
    for (double r : radii) {
      bool inside = true;
      double mean = 0.0;
      for (int s = 0; s < samples && inside; ++s) {
        const auto v = u.interpolate(c + std::polar(r, 2.0 * std::numbers::pi * s / samples));
        if (!v) inside = false;
        else mean += *v;
      }
      if (!inside) continue;
      ++report.disks_checked;
      const double deficit = mean / samples - u.values[k];
      if (deficit < report.min_deficit) {
        report.min_deficit = deficit;
        report.argmin = DiskSpec{c, r, samples};
      }
    }
  }
  if (report.disks_checked == 0) report.min_deficit = 0.0;
  report.pass = report.min_deficit >= -report.tolerance;
  return report;
}

GridFunction harmonic_replacement(const GridFunction& u, const DiskSpec& disk) {
  // Sample count per node grows like 1 / (1 - |w|) so the kernel stays
  // resolved near the circle; sums are normalised by the discrete kernel mass.
  constexpr int kMaxSamples = 8192;
  std::map<int, std::vector<double>> sets;
  auto samples_for = [&](int m) -> const std::vector<double>& {
    auto it = sets.find(m);
    if (it == sets.end()) it = sets.emplace(m, circle_samples(u, {disk.center, disk.radius, m})).first;
    return it->second;
  };
  samples_for(disk.samples);
  GridFunction out = u;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (!u.available(static_cast<std::ptrdiff_t>(k))) continue;
    const Point w = (u.domain->point(k) - disk.center) / disk.radius;
    const double gap = 1.0 - std::abs(w);
    if (gap < 1e-6) continue;
    int m = disk.samples;
    while (m < kMaxSamples && m * gap < 32.0) m *= 2;
    const auto& f = samples_for(m);
    double num = 0.0, den = 0.0;
    for (int q = 0; q < m; ++q) {
      const double kernel = 1.0 / std::norm(std::polar(1.0, 2.0 * std::numbers::pi * q / m) - w);
      num += kernel * f[q];
      den += kernel;
    }
    out.values[k] = num / den;
  }
  return out;
}

}  // namespace uniformize
