#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "uniformize/domain.hpp"

namespace uniformize {

/// Real samples on the interior nodes of a domain plus values at every
/// boundary crossing. An optional puncture marks one interior node whose
/// value is undefined (a logarithmic pole); it is skipped by every
/// differencing and interpolation routine.
struct GridFunction {
  DomainPtr domain;
  std::vector<double> values;
  std::vector<double> boundary;
  std::optional<std::size_t> puncture;

  GridFunction() = default;
  explicit GridFunction(DomainPtr d, double fill = 0.0);

  static GridFunction sample(DomainPtr d, const std::function<double(Point)>& f);

  bool available(std::ptrdiff_t k) const {
    return k >= 0 && !(puncture && *puncture == static_cast<std::size_t>(k));
  }

  /// Bilinear interpolation; empty when a corner of the cell is not an
  /// available interior node.
  std::optional<double> interpolate(Point p) const;

  /// (du/dx, du/dy) at interior node k, second order, using crossing values
  /// next to the boundary.
  Point gradient(std::size_t k) const;

  double min_value() const;
  double max_value() const;
};

/// max |a - b| over interior nodes available in both.
double max_abs_difference(const GridFunction& a, const GridFunction& b);

struct ComplexField {
  DomainPtr domain;
  std::vector<std::complex<double>> values;

  ComplexField() = default;
  explicit ComplexField(DomainPtr d) : domain(std::move(d)), values(domain->interior_count()) {}

  static ComplexField sample(DomainPtr d, const std::function<std::complex<double>(Point)>& f);

  std::optional<std::complex<double>> interpolate(Point p) const;
};

}  // namespace uniformize
