#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "uniformize/error.hpp"
#include "uniformize/harmonic.hpp"
#include "uniformize/oracle.hpp"
#include "uniformize/stencil.hpp"

namespace uniformize {

int configured_threads() {
  const char* env = std::getenv("UNIFORMIZE_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

namespace {

// One SOR pass over `nodes`; returns the largest residual seen.
double relax(const Stencil& st, std::span<const std::uint32_t> nodes, std::vector<double>& u,
             std::span<const double> b, double omega) {
  double m = 0.0;
  for (std::uint32_t k : nodes) {
    const double r = st.average(k, u, b) - u[k];
    m = std::max(m, std::abs(r));
    u[k] += omega * r;
  }
  return m;
}

DirichletResult solve_sor(DomainPtr domain, std::span<const double> b, const SorOptions& opt,
                          std::span<const double> initial) {
  const GridDomain& dom = *domain;
  const Stencil st(dom);
  const std::size_t n = dom.interior_count();

  DirichletResult res;
  res.solution = GridFunction(domain);
  res.solution.boundary.assign(b.begin(), b.end());
  auto& u = res.solution.values;
  if (!initial.empty()) {
    if (initial.size() != n) throw Error(ErrorCode::InvalidArgument, "initial guess has wrong size");
    std::copy(initial.begin(), initial.end(), u.begin());
  } else if (!b.empty()) {
    double mean = 0.0;
    for (double v : b) mean += v;
    std::fill(u.begin(), u.end(), mean / static_cast<double>(b.size()));
  }

  // Jacobi radius of the interior bounding rectangle.
  const GridGeometry& g = dom.grid();
  int i0 = g.nx, i1 = 0, j0 = g.ny, j1 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    i0 = std::min(i0, dom.col(k)), i1 = std::max(i1, dom.col(k));
    j0 = std::min(j0, dom.row(k)), j1 = std::max(j1, dom.row(k));
  }
  const double rho_j = 0.5 * (std::cos(std::numbers::pi / (i1 - i0 + 2)) + std::cos(std::numbers::pi / (j1 - j0 + 2)));
  const double omega = opt.omega > 0.0 ? opt.omega : 2.0 / (1.0 + std::sqrt(1.0 - rho_j * rho_j));
  res.omega = omega;

  const int threads = std::max(1, opt.threads > 0 ? opt.threads : configured_threads());
  const auto& colors = st.colors();

  auto converged = [&](double sweep_max) {
    if (sweep_max >= opt.tol) return false;
    res.residual = st.residual(u, b);
    return res.residual < opt.tol;
  };

  if (threads == 1 || n < 4096) {
    for (int it = 1; it <= opt.max_iterations; ++it) {
      double m = relax(st, colors[0], u, b, omega);
      m = std::max(m, relax(st, colors[1], u, b, omega));
      if (converged(m)) {
        res.iterations = it;
        return res;
      }
    }
  } else {
    // Colour sets are split into contiguous chunks; within one colour the
    // updates are independent, so the result does not depend on `threads`.
    std::vector<double> partial(static_cast<std::size_t>(threads), 0.0);
    std::atomic<bool> done{false};
    int iterations = 0;
    std::barrier sync(threads);
    auto chunk = [&](int c, int t) {
      const auto& set = colors[c];
      const std::size_t lo = set.size() * t / threads, hi = set.size() * (t + 1) / threads;
      return std::span<const std::uint32_t>(set.data() + lo, hi - lo);
    };
    auto worker = [&](int t) {
      for (int it = 1; it <= opt.max_iterations; ++it) {
        double m = relax(st, chunk(0, t), u, b, omega);
        sync.arrive_and_wait();
        m = std::max(m, relax(st, chunk(1, t), u, b, omega));
        partial[t] = m;
        sync.arrive_and_wait();
        if (t == 0) {
          const double all = *std::max_element(partial.begin(), partial.end());
          if (converged(all)) {
            iterations = it;
            done = true;
          }
        }
        sync.arrive_and_wait();
        if (done) return;
      }
    };
    {
      std::vector<std::jthread> pool;
      for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
      worker(0);
    }
    if (done) {
      res.iterations = iterations;
      return res;
    }
  }
  res.residual = st.residual(u, b);
  throw Error(ErrorCode::NotConverged, "SOR did not converge within " + std::to_string(opt.max_iterations) +
                                           " iterations (residual " + std::to_string(res.residual) + ")");
}

}  // namespace

DirichletResult solve_dirichlet(DomainPtr domain, std::span<const double> boundary_values,
                                DirichletMethod method, const SorOptions& options,
                                std::span<const double> initial) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "null domain");
  if (boundary_values.size() != domain->crossings().size()) {
    throw Error(ErrorCode::InvalidArgument, "boundary data size does not match crossing count");
  }
  for (double v : boundary_values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "boundary data must be finite");
  }
  if (method == DirichletMethod::Direct) {
    DenseResult d = dense_laplace(std::move(domain), boundary_values);
    DirichletResult r;
    r.solution = std::move(d.solution);
    r.residual = d.residual;
    return r;
  }
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "SOR tolerance must be positive");
  return solve_sor(std::move(domain), boundary_values, options, initial);
}

}  // namespace uniformize
