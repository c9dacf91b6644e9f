#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "uniformize/domain.hpp"

namespace uniformize {

/// Shortley-Weller five-point stencil written as a weighted average:
///   u_P = sum_q w_q u_q,  sum_q w_q = 1,
/// where u_q is either an interior neighbour or the boundary value at a
/// crossing. Weights are w_E = 1/(tE (tE + tW)) etc., normalised by
/// 1/(tE tW) + 1/(tN tS).
struct StencilRow {
  std::array<std::int32_t, 4> neighbor{-1, -1, -1, -1};
  std::array<std::int32_t, 4> crossing{-1, -1, -1, -1};
  std::array<double, 4> weight{};
};

class Stencil {
 public:
  explicit Stencil(const GridDomain& domain);

  std::size_t size() const { return rows_.size(); }
  const StencilRow& row(std::size_t k) const { return rows_[k]; }

  /// Weighted neighbour average at node k.
  double average(std::size_t k, std::span<const double> u, std::span<const double> boundary) const {
    const StencilRow& r = rows_[k];
    double s = 0.0;
    for (int q = 0; q < 4; ++q) {
      s += r.weight[q] * (r.neighbor[q] >= 0 ? u[r.neighbor[q]] : boundary[r.crossing[q]]);
    }
    return s;
  }

  /// Interior nodes split by checkerboard colour, row-major inside each colour.
  const std::array<std::vector<std::uint32_t>, 2>& colors() const { return colors_; }

  /// max_k |average(k) - u_k|.
  double residual(std::span<const double> u, std::span<const double> boundary) const;

 private:
  std::vector<StencilRow> rows_;
  std::array<std::vector<std::uint32_t>, 2> colors_;
};

}  // namespace uniformize
