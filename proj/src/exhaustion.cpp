#include <algorithm>
#include <cmath>

#include "uniformize/conformal.hpp"
#include "uniformize/error.hpp"

namespace uniformize {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "CONVERGED";
    case Verdict::DivergentRadius: return "DIVERGENT_RADIUS";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

ExhaustionReport run_exhaustion(const LevelSpec& spec, std::span<const double> levels, const GridGeometry& grid,
                                const ExhaustionConfig& cfg) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "exhaustion needs at least one level");
  if (!(cfg.tol_conv > 0.0) || !(cfg.divergence_ratio > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tol_conv must be positive and the divergence ratio above 1");
  }
  const auto domains = build_exhaustion(spec, levels, grid);
  const Point pole = cfg.pole.value_or(spec.basepoint);
  const double h = grid.h;

  ExhaustionReport rep;
  const GridDomain& k0 = *domains.front().domain;
  int stride = cfg.sample_stride;
  if (stride <= 0) {
    int lo_i = grid.nx, hi_i = 0, lo_j = grid.ny, hi_j = 0;
    for (std::size_t k = 0; k < k0.interior_count(); ++k) {
      lo_i = std::min(lo_i, k0.col(k));
      hi_i = std::max(hi_i, k0.col(k));
      lo_j = std::min(lo_j, k0.row(k));
      hi_j = std::max(hi_j, k0.row(k));
    }
    stride = std::max(1, std::max(hi_i - lo_i, hi_j - lo_j) / 32);
  }
  std::vector<std::size_t> sample_ids;
  for (std::size_t k = 0; k < k0.interior_count(); ++k) {
    if (k0.col(k) % stride || k0.row(k) % stride) continue;
    if (k0.clearance(k0.point(k), 2.0 * h) < 2.0 * h * (1.0 - 1e-12)) continue;
    sample_ids.push_back(k0.interior_nodes()[k]);
    rep.samples.push_back(k0.point(k));
  }

  for (std::size_t n = 0; n < domains.size(); ++n) {
    const DomainPtr& dom = domains[n].domain;
    const GreenResult g = green_direct(dom, pole);
    MapResult m = normalize_map(uniformizing_map(g));
    ExhaustionLevel lv;
    lv.level = domains[n].level;
    lv.r = m.r;
    lv.sweeps = g.sweeps;
    lv.nodes = dom->interior_count();
    lv.perturbation_steps = domains[n].perturbation_steps;
    lv.snapshot.reserve(sample_ids.size());
    for (std::size_t id : sample_ids) {
      const auto k = dom->interior_index(id);
      if (k < 0) throw Error(ErrorCode::NestingViolation, "K0 sample outside a later level");
      lv.snapshot.push_back(m.phi.values[k]);
    }
    if (n > 0) {
      const auto& prev = rep.levels.back();
      for (std::size_t s = 0; s < lv.snapshot.size(); ++s) {
        lv.delta = std::max(lv.delta, std::abs(lv.snapshot[s] - prev.snapshot[s]));
      }
      if (lv.r < prev.r - 10.0 * h * h) rep.radius_monotone = false;
    }
    rep.levels.push_back(std::move(lv));
    if (n + 1 == domains.size()) rep.final_map = std::move(m);
  }

  const auto& L = rep.levels;
  const std::size_t N = L.size();
  rep.verdict = Verdict::Undecided;
  if (N >= 3) {
    const bool grows = L[N - 1].r / L[N - 2].r >= cfg.divergence_ratio && L[N - 2].r / L[N - 3].r >= cfg.divergence_ratio;
    const bool settles = L[N - 1].delta < cfg.tol_conv && L[N - 2].delta < cfg.tol_conv &&
                         std::abs(L[N - 1].r - L[N - 2].r) / L[N - 1].r < cfg.tol_conv;
    if (grows) rep.verdict = Verdict::DivergentRadius;
    else if (settles) rep.verdict = Verdict::Converged;
  }
  return rep;
}

}  // namespace uniformize
