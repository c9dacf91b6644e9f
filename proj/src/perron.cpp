#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uniformize/error.hpp"
#include "uniformize/harmonic.hpp"
#include "uniformize/stencil.hpp"

namespace uniformize {

namespace {

// Every node update has the form  u_P <- min(c_P + sum_q w_q u_q, cap_P).
// Plain Perron uses c = 0 and no cap. In the pole-aware form c_P absorbs the
// singular part so that nodes near the pole relax u - S.
class Scheme {
 public:
  Scheme(const GridDomain& dom, std::span<const double> boundary, const PerronSingularity* sing)
      : st_(dom), b_(boundary) {
    const std::size_t n = dom.interior_count();
    if (!sing) return;
    if (sing->singular.size() != n || sing->regular_form.size() != n ||
        sing->singular_boundary.size() != boundary.size() || (!sing->cap.empty() && sing->cap.size() != n)) {
      throw Error(ErrorCode::InvalidArgument, "singularity data does not match the domain");
    }
    cap_ = sing->cap;
    c_.assign(n, 0.0);
    auto shift = [&](std::ptrdiff_t q) {
      return (sing->pole && static_cast<std::size_t>(q) == *sing->pole) ? 0.0 : sing->singular[q];
    };
    for (std::size_t k = 0; k < n; ++k) {
      const bool is_pole = sing->pole && *sing->pole == k;
      const StencilRow& r = st_.row(k);
      bool touches_pole = false;
      for (int q = 0; q < 4; ++q) {
        if (sing->pole && r.neighbor[q] == static_cast<std::int32_t>(*sing->pole)) touches_pole = true;
      }
      if (!is_pole && !sing->regular_form[k]) {
        if (touches_pole) throw Error(ErrorCode::InvalidArgument, "pole neighbours must use the regular form");
        continue;
      }
      double s = is_pole ? 0.0 : sing->singular[k];
      for (int q = 0; q < 4; ++q) {
        s -= r.weight[q] * (r.neighbor[q] >= 0 ? shift(r.neighbor[q]) : sing->singular_boundary[r.crossing[q]]);
      }
      c_[k] = s;
    }
  }

  const Stencil& stencil() const { return st_; }

  double target(std::size_t k, std::span<const double> u) const {
    double v = st_.average(k, u, b_);
    if (!c_.empty()) v += c_[k];
    if (!cap_.empty()) v = std::min(v, cap_[k]);
    return v;
  }

  bool capped(std::size_t k, std::span<const double> u) const {
    if (cap_.empty()) return false;
    double v = st_.average(k, u, b_);
    if (!c_.empty()) v += c_[k];
    return v > cap_[k];
  }

 private:
  Stencil st_;
  std::span<const double> b_;
  std::vector<double> c_;
  std::vector<double> cap_;
};

struct Tracker {
  double min_increment = 0.0;
  void record(double d) { min_increment = std::min(min_increment, d); }
};

// Interior nodes in open disks of radius r (lattice units) centred on the
// lattice points (s i, s j), s = max(1, floor(r)).
std::vector<std::vector<std::uint32_t>> disk_cover(const GridDomain& dom, double r) {
  const GridGeometry& g = dom.grid();
  const int s = std::max(1, static_cast<int>(std::floor(r + 1e-9)));
  const int ri = static_cast<int>(std::ceil(r));
  std::vector<std::vector<std::uint32_t>> out;
  for (int cj = 0; cj <= g.ny; cj += s) {
    for (int ci = 0; ci <= g.nx; ci += s) {
      std::vector<std::uint32_t> nodes;
      for (int j = std::max(0, cj - ri); j <= std::min(g.ny, cj + ri); ++j) {
        for (int i = std::max(0, ci - ri); i <= std::min(g.nx, ci + ri); ++i) {
          const double d2 = double(i - ci) * (i - ci) + double(j - cj) * (j - cj);
          if (d2 >= r * r) continue;
          const auto k = dom.interior_index(i, j);
          if (k >= 0) nodes.push_back(static_cast<std::uint32_t>(k));
        }
      }
      if (nodes.size() > 1) out.push_back(std::move(nodes));
    }
  }
  return out;
}

// Discrete harmonic replacement on one disk: projected SOR on the disk nodes
// with everything outside frozen, then pointwise max with the old values.
void replace_disk(const Scheme& sch, std::span<const std::uint32_t> nodes, std::vector<double>& u,
                  std::vector<double>& scratch, double omega, Tracker& tr) {
  scratch.resize(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) scratch[a] = u[nodes[a]];
  double scale = 1.0;
  for (std::uint32_t k : nodes) scale = std::max(scale, std::abs(u[k]));
  const double tol = 1e-13 * scale;
  for (int it = 0; it < 20000; ++it) {
    double change = 0.0;
    for (std::uint32_t k : nodes) {
      const double t = sch.target(k, u);
      const double next = u[k] + omega * (t - u[k]);
      const double v = std::isfinite(next) ? next : t;
      change = std::max(change, std::abs(v - u[k]));
      u[k] = v;
    }
    if (change < tol) break;
  }
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const std::uint32_t k = nodes[a];
    tr.record(u[k] - scratch[a]);
    u[k] = std::max(u[k], scratch[a]);
  }
}

}  // namespace

PerronResult perron_iterate(std::span<const double> boundary_values, const GridFunction& seed,
                            const PerronConfig& cfg, const PerronSingularity* singularity) {
  if (!seed.domain) throw Error(ErrorCode::InvalidArgument, "seed has no domain");
  const GridDomain& dom = *seed.domain;
  const double h = dom.h();
  if (boundary_values.size() != dom.crossings().size()) {
    throw Error(ErrorCode::InvalidArgument, "boundary data size does not match crossing count");
  }
  if (!(cfg.tol_iter > 0.0) || cfg.max_sweeps < 1) {
    throw Error(ErrorCode::InvalidArgument, "Perron tolerance and sweep budget must be positive");
  }
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) radii = {8 * h, 4 * h, 2 * h, h};
  for (double r : radii) {
    if (r < h * (1.0 - 1e-12)) throw Error(ErrorCode::InvalidArgument, "Perron radii must be at least h");
  }

  const Scheme sch(dom, boundary_values, singularity);
  const Stencil& st = sch.stencil();
  const auto& colors = st.colors();

  PerronResult res;
  res.solution = seed;
  res.solution.boundary.assign(boundary_values.begin(), boundary_values.end());
  auto& u = res.solution.values;
  std::optional<std::size_t> pole;
  if (singularity && singularity->pole) {
    pole = singularity->pole;
    u[*pole] = singularity->pole_seed;
    res.solution.puncture.reset();
  }

  Tracker tr;
  auto check_monotone = [&]() {
    if (tr.min_increment < -cfg.monotonicity_slack) {
      throw Error(ErrorCode::MonotonicityViolated,
                  "Perron iterate decreased by " + std::to_string(-tr.min_increment) + " at sweep " +
                      std::to_string(res.sweeps));
    }
  };

  // One Gauss-Seidel pass: single-cell replacement at every node.
  auto fine_sweep = [&]() {
    double change = 0.0;
    for (const auto& set : colors) {
      for (std::uint32_t k : set) {
        const double v = sch.target(k, u);
        const double d = v - u[k];
        tr.record(d);
        change = std::max(change, std::abs(d));
        u[k] = v;
      }
    }
    return change;
  };

  std::vector<double> scratch;
  for (double r : radii) {
    const double rl = r / h;
    if (rl <= 1.0 + 1e-9) {
      for (int p = 0; p < cfg.passes_per_radius; ++p) {
        res.last_change = fine_sweep();
        ++res.sweeps;
        check_monotone();
      }
      continue;
    }
    const auto cover = disk_cover(dom, rl);
    const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / (2.0 * rl + 2.0)));
    for (int p = 0; p < cfg.passes_per_radius; ++p) {
      for (const auto& nodes : cover) {
        replace_disk(sch, nodes, u, scratch, omega, tr);
        ++res.disk_replacements;
      }
      ++res.sweeps;
      check_monotone();
    }
  }

  int fine = 0;
  for (;;) {
    if (fine >= cfg.max_sweeps) {
      throw Error(ErrorCode::NotConverged, "Perron iteration exceeded " + std::to_string(cfg.max_sweeps) +
                                               " sweeps (last change " + std::to_string(res.last_change) + ")");
    }
    res.last_change = fine_sweep();
    ++fine;
    ++res.sweeps;
    check_monotone();
    if (res.last_change < cfg.tol_iter) break;
  }

  for (std::size_t k = 0; k < u.size(); ++k) {
    if (sch.capped(k, u)) ++res.cap_activations;
  }
  res.min_increment = tr.min_increment;
  if (pole) {
    res.pole_regular_value = u[*pole];
    res.solution.puncture = pole;
  }
  return res;
}

PerronResult perron_solve(std::span<const double> boundary_values, const GridFunction& seed,
                          const PerronConfig& cfg) {
  if (!seed.domain) throw Error(ErrorCode::InvalidArgument, "seed has no domain");
  const double h = seed.domain->h();
  if (cfg.check_seed) {
    const double radii[] = {2 * h, 4 * h};
    const auto rep = check_subharmonic(seed, radii);
    if (!rep.pass) {
      throw Error(ErrorCode::InvalidArgument,
                  "seed is not subharmonic (min deficit " + std::to_string(rep.min_deficit) + ")");
    }
    if (seed.boundary.size() != boundary_values.size()) {
      throw Error(ErrorCode::InvalidArgument, "seed boundary trace has the wrong size");
    }
    for (std::size_t c = 0; c < boundary_values.size(); ++c) {
      if (seed.boundary[c] > boundary_values[c] + cfg.monotonicity_slack) {
        throw Error(ErrorCode::InvalidArgument, "seed boundary trace exceeds the boundary data");
      }
    }
  }
  return perron_iterate(boundary_values, seed, cfg, nullptr);
}

}  // namespace uniformize
