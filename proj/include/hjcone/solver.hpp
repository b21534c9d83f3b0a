#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hjcone/grid.hpp"
#include "hjcone/hamiltonian.hpp"
#include "hjcone/measure.hpp"

namespace hjcone {

// Initial data evaluated at chain-cone points x, understood as the measure
// (1/K) sum_k delta_{x_k}; lip is its constant for the coupling distance.
struct InitialCondition {
  std::function<double(const ConePoint&)> psi;
  double lip = 1.0;

  static InitialCondition constant(double c);
  // f0(x) = sum_k b_k . x_k
  static InitialCondition affine(const ConePoint& b);
};

struct SolveOptions {
  bool parallel = true;
  int snapshot_stride = 1;
  double theta_override = 0.0;  // 0: derive from the Hamiltonian slope bound
  std::uint64_t seed = 0;
};

// Explicit monotone scheme for  d_t f = H(grad f)  on the gridded cone with
// one-sided closures on the chart facets:
//   f^{n+1} = f^n + dt [ H(D_c f^n) + (theta/2h) * sum_d visc_d ],
// central differences and full viscosity in the interior; one-sided
// differences toward the interior plus reflected viscosity at facets.
SolutionField solve(const ChainHamiltonian& ham, const InitialCondition& ic, GridSpec grid,
                    double T, const SolveOptions& opts = {});

// One scheme step, exposed for the serial/parallel equivalence tests and the
// benchmark. Writes f_next; both variants produce identical values.
void step_serial(const ChainHamiltonian& ham, const GridSpec& grid, double theta, double dt,
                 std::uint64_t seed, int step_index, const std::vector<double>& f,
                 std::vector<double>& f_next);
void step_parallel(const ChainHamiltonian& ham, const GridSpec& grid, double theta, double dt,
                   std::uint64_t seed, int step_index, const std::vector<double>& f,
                   std::vector<double>& f_next);

// max over times of sup(u - v) minus its value at time zero; for scheme
// outputs from ordered data this is bounded by the scheme tolerance.
double check_comparison(const SolutionField& u, const SolutionField& v);

// max over axis-neighbor pairs of |df| / h at one time level.
double lipschitz_seminorm(const SolutionField& fld, std::size_t t_index);

struct KConvergenceTable {
  std::vector<int> K_values;
  std::vector<double> f_values;
  double extrapolated = 0.0;
  double c_fit = 0.0;  // sup_K sqrt(K) |f_{2K} - f_K| over consecutive pairs
};

// Finite-K values f^{(K)}(t, x^{(K)}(mu)) for each K in K_list (ascending),
// with grids for K <= 3 and the block-duplication shortcut for larger K when
// the discretized measure has repeated-block structure.
KConvergenceTable f_limit(const RegularizedXi& xibar, const InitialCondition& ic,
                          const DiscreteMonotoneMeasure& mu, double t,
                          const std::vector<int>& K_list, double h, double x_max,
                          const SolveOptions& opts = {});

}  // namespace hjcone
