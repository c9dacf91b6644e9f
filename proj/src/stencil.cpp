#include "uniformize/stencil.hpp"

#include <algorithm>
#include <cmath>

namespace uniformize {

Stencil::Stencil(const GridDomain& domain) : rows_(domain.interior_count()) {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto& arms = domain.arms(k);
    const double te = arms[index_of(Dir::East)].theta, tw = arms[index_of(Dir::West)].theta;
    const double tn = arms[index_of(Dir::North)].theta, ts = arms[index_of(Dir::South)].theta;
    std::array<double, 4> w{};
    w[index_of(Dir::East)] = 1.0 / (te * (te + tw));
    w[index_of(Dir::West)] = 1.0 / (tw * (te + tw));
    w[index_of(Dir::North)] = 1.0 / (tn * (tn + ts));
    w[index_of(Dir::South)] = 1.0 / (ts * (tn + ts));
    const double total = 1.0 / (te * tw) + 1.0 / (tn * ts);
    StencilRow& r = rows_[k];
    for (int q = 0; q < 4; ++q) {
      r.weight[q] = w[q] / total;
      r.neighbor[q] = static_cast<std::int32_t>(arms[q].neighbor);
      r.crossing[q] = static_cast<std::int32_t>(arms[q].crossing);
    }
    colors_[(domain.col(k) + domain.row(k)) & 1].push_back(static_cast<std::uint32_t>(k));
  }
}

double Stencil::residual(std::span<const double> u, std::span<const double> boundary) const {
  double m = 0.0;
  for (std::size_t k = 0; k < rows_.size(); ++k) m = std::max(m, std::abs(average(k, u, boundary) - u[k]));
  return m;
}

}  // namespace uniformize
