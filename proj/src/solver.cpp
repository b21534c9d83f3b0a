#include "hjcone/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hjcone/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hjcone {

InitialCondition InitialCondition::constant(double c) {
  return InitialCondition{[c](const ConePoint&) { return c; }, 0.0};
}

InitialCondition InitialCondition::affine(const ConePoint& b) {
  double lip = 0.0;
  for (const auto& p : b.parts) lip = std::max(lip, p.norm());
  return InitialCondition{[b](const ConePoint& x) { return frob_dot(b, x); }, lip};
}

namespace {

// One nodal update. Gradient components use central differences where both
// neighbors exist, one-sided toward the interior otherwise; the viscosity
// uses the reflected ghost at one-sided nodes, which keeps every
// off-diagonal coefficient of the update nonnegative for theta >= |H'|.
inline double update_node(const ChainHamiltonian& ham, const GridSpec& grid, double theta,
                          double dt, std::uint64_t seed, int step_index,
                          const std::vector<double>& f, std::size_t i) {
  const int nd = grid.ndims();
  const double h = grid.h;
  double g[3] = {0.0, 0.0, 0.0};
  double visc = 0.0;
  const double fi = f[i];
  for (int d = 0; d < nd; ++d) {
    const int np = grid.neighbor(i, d, +1);
    const int nm = grid.neighbor(i, d, -1);
    if (np >= 0 && nm >= 0) {
      g[d] = (f[np] - f[nm]) / (2.0 * h);
      visc += f[np] - 2.0 * fi + f[nm];
    } else if (nm >= 0) {
      g[d] = (fi - f[nm]) / h;
      visc += 2.0 * (f[nm] - fi);
    } else if (np >= 0) {
      g[d] = (f[np] - fi) / h;
      visc += 2.0 * (f[np] - fi);
    }
  }
  double hval;
  if (grid.chart == GridSpec::Chart::Simplex1D) {
    hval = ham.value_extended_scalar(g, grid.K,
                                     derive_seed(seed, static_cast<std::uint64_t>(step_index), i));
  } else {
    Eigen::MatrixXd G(2, 2);
    G << g[0], 0.5 * g[1], 0.5 * g[1], g[2];
    hval = ham.value_extended(ConePoint({SymMatrix::from_dense(G)}),
                              derive_seed(seed, static_cast<std::uint64_t>(step_index), i));
  }
  return fi + dt * (hval + theta / (2.0 * h) * visc);
}

}  // namespace

void step_serial(const ChainHamiltonian& ham, const GridSpec& grid, double theta, double dt,
                 std::uint64_t seed, int step_index, const std::vector<double>& f,
                 std::vector<double>& f_next) {
  const std::size_t n = grid.num_nodes();
  for (std::size_t i = 0; i < n; ++i)
    f_next[i] = update_node(ham, grid, theta, dt, seed, step_index, f, i);
}

void step_parallel(const ChainHamiltonian& ham, const GridSpec& grid, double theta, double dt,
                   std::uint64_t seed, int step_index, const std::vector<double>& f,
                   std::vector<double>& f_next) {
  const std::int64_t n = static_cast<std::int64_t>(grid.num_nodes());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i)
    f_next[i] = update_node(ham, grid, theta, dt, seed, step_index, f,
                            static_cast<std::size_t>(i));
}

SolutionField solve(const ChainHamiltonian& ham, const InitialCondition& ic, GridSpec grid,
                    double T, const SolveOptions& opts) {
  if (T <= 0.0) throw std::invalid_argument("solve: T must be positive");
  if (ham.K != grid.K || ham.xibar.base.dim() != grid.D)
    throw std::invalid_argument("solve: Hamiltonian/grid shape mismatch");

  const double theta =
      opts.theta_override > 0.0 ? opts.theta_override
                                : std::max(1e-3, ham.slope_bound(1.3 * std::max(ic.lip, 0.1)));
  const double cfl = grid.h / (2.0 * theta * grid.ndims());
  if (grid.dt <= 0.0) {
    const int steps = static_cast<int>(std::ceil(T / (0.9 * cfl)));
    grid.dt = T / steps;
  } else if (grid.dt > cfl * (1.0 + 1e-12)) {
    throw std::invalid_argument("solve: CFL violation (dt too large for theta and h)");
  }
  const int steps = static_cast<int>(std::lround(T / grid.dt));
  if (std::abs(steps * grid.dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("solve: T must be an integer number of steps");

  SolutionField out;
  out.grid = grid;
  const std::size_t n = grid.num_nodes();
  std::vector<double> f(n), fn(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = ic.psi(grid.node_point(i));

  out.times.push_back(0.0);
  out.values.push_back(f);

  for (int s = 0; s < steps; ++s) {
    if (opts.parallel) {
      step_parallel(ham, grid, theta, grid.dt, opts.seed, s, f, fn);
    } else {
      step_serial(ham, grid, theta, grid.dt, opts.seed, s, f, fn);
    }
    f.swap(fn);
    for (double v : f) {
      if (!std::isfinite(v)) throw std::runtime_error("solve: non-finite value detected");
    }
    if ((s + 1) % opts.snapshot_stride == 0 || s + 1 == steps) {
      out.times.push_back((s + 1) * grid.dt);
      out.values.push_back(f);
    }
  }
  return out;
}

double check_comparison(const SolutionField& u, const SolutionField& v) {
  if (u.times.size() != v.times.size() || u.grid.num_nodes() != v.grid.num_nodes())
    throw std::invalid_argument("check_comparison: grid mismatch");
  double base = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.grid.num_nodes(); ++i)
    base = std::max(base, u.values[0][i] - v.values[0][i]);
  double worst = 0.0;
  for (std::size_t t = 0; t < u.times.size(); ++t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.grid.num_nodes(); ++i)
      m = std::max(m, u.values[t][i] - v.values[t][i]);
    worst = std::max(worst, m - base);
  }
  return worst;
}

double lipschitz_seminorm(const SolutionField& fld, std::size_t t_index) {
  const auto& f = fld.values.at(t_index);
  const auto& g = fld.grid;
  double m = 0.0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (int d = 0; d < g.ndims(); ++d) {
      const int np = g.neighbor(i, d, +1);
      if (np >= 0) m = std::max(m, std::abs(f[np] - f[i]) / g.h);
    }
  }
  return m;
}

KConvergenceTable f_limit(const RegularizedXi& xibar, const InitialCondition& ic,
                          const DiscreteMonotoneMeasure& mu, double t,
                          const std::vector<int>& K_list, double h, double x_max,
                          const SolveOptions& opts) {
  if (mu.dim != 1) throw std::invalid_argument("f_limit: D = 1 envelope only");
  KConvergenceTable table;
  for (std::size_t idx = 0; idx < K_list.size(); ++idx) {
    const int K = K_list[idx];
    if (idx > 0 && K <= K_list[idx - 1]) throw std::invalid_argument("f_limit: K_list not ascending");
    const ConePoint x = discretize(mu, K);
    double value;
    if (K <= 3) {
      GridSpec grid = GridSpec::simplex1d(K, h, x_max);
      ChainHamiltonian ham(K, xibar);
      const SolutionField fld = solve(ham, ic, grid, t, opts);
      value = fld.interpolate(fld.times.size() - 1, x);
    } else {
      // duplication shortcut: valid when the discretized point consists of
      // R-fold repeated blocks of the K0-level discretization
      value = std::numeric_limits<double>::quiet_NaN();
      for (int K0 = 3; K0 >= 1; --K0) {
        if (K % K0 != 0) continue;
        const int R = K / K0;
        const ConePoint x0 = discretize(mu, K0);
        bool match = true;
        for (int k = 0; k < K && match; ++k)
          match = std::abs(x.parts[k](0, 0) - x0.parts[k / R](0, 0)) <= 1e-12;
        if (!match) continue;
        GridSpec grid = GridSpec::simplex1d(K0, h, x_max);
        ChainHamiltonian ham(K0, xibar);
        const SolutionField fld = solve(ham, ic, grid, t, opts);
        value = fld.interpolate(fld.times.size() - 1, x0);
        break;
      }
      if (!std::isfinite(value))
        throw std::invalid_argument("f_limit: unsupported (D,K) combination");
    }
    table.K_values.push_back(K);
    table.f_values.push_back(value);
  }
  // c/sqrt(K) fit over consecutive pairs and Richardson-style extrapolation
  for (std::size_t i = 0; i + 1 < table.f_values.size(); ++i) {
    const double K1 = table.K_values[i], K2 = table.K_values[i + 1];
    const double diff = std::abs(table.f_values[i + 1] - table.f_values[i]);
    table.c_fit = std::max(table.c_fit, diff / (1.0 / std::sqrt(K1) - 1.0 / std::sqrt(K2)));
  }
  if (table.f_values.size() >= 2) {
    const std::size_t m = table.f_values.size();
    const double K1 = table.K_values[m - 2], K2 = table.K_values[m - 1];
    const double c = (table.f_values[m - 1] - table.f_values[m - 2]) /
                     (1.0 / std::sqrt(K1) - 1.0 / std::sqrt(K2));
    table.extrapolated = table.f_values[m - 1] + c / std::sqrt(K2);
  } else if (!table.f_values.empty()) {
    table.extrapolated = table.f_values.back();
  }
  return table;
}

}  // namespace hjcone
