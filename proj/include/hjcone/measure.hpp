#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hjcone/cone.hpp"
#include "hjcone/sym.hpp"

namespace hjcone {

// Finite monotone measure on the PSD cone, stored in cut-point form:
// cuts 0 = z_0 < z_1 < ... < z_L = 1 and atoms q_0 <= ... <= q_{L-1}
// (weak PSD chain; equal neighbours allowed). The step function
// u -> atoms[k] for u in [z_k, z_{k+1}) is the quantile path of the measure.
struct DiscreteMonotoneMeasure {
  int dim = 1;
  std::vector<double> cuts;
  std::vector<SymMatrix> atoms;

  DiscreteMonotoneMeasure() = default;
  DiscreteMonotoneMeasure(int d, std::vector<double> c, std::vector<SymMatrix> a,
                          double tol = kDefaultTol);

  static DiscreteMonotoneMeasure dirac(const SymMatrix& q);
  // atoms with probability weights (must sum to 1); weights become cut gaps.
  static DiscreteMonotoneMeasure from_weights(const std::vector<SymMatrix>& atoms,
                                              const std::vector<double>& weights,
                                              double tol = kDefaultTol);

  // number of atoms (levels of the step path)
  int levels() const { return static_cast<int>(atoms.size()); }
  double weight(int k) const { return cuts[k + 1] - cuts[k]; }

  // merge adjacent equal atoms
  DiscreteMonotoneMeasure canonical(double tol = kDefaultTol) const;

  double second_moment() const;  // E[|X_mu|^2]
};

// Quantile path evaluation M_mu(u), right-continuous, u in [0,1).
const SymMatrix& eval_M(const DiscreteMonotoneMeasure& mu, double u);

// Scalar distribution in (support, cdf) form; support strictly increasing,
// cdf nondecreasing ending at 1.
struct ScalarQuantile {
  std::vector<double> support;
  std::vector<double> cdf;
  ScalarQuantile(std::vector<double> s, std::vector<double> c);
};

// Generalized inverse: first support point whose cdf reaches u, u in (0,1].
double scalar_quantile(const ScalarQuantile& q, double u);

struct WeightedPair {
  double x, y, w;
};

// True iff the weighted sample of pairs is comonotone: the joint cdf equals
// the min of the marginals on the support grid.
bool check_monotone_pair(const std::vector<WeightedPair>& samples, double tol = 1e-12);

// True iff the atoms are totally ordered under the PSD order; throws on a
// non-PSD atom. For finite support this chain criterion is equivalent to the
// pairwise-projection definition of monotonicity.
bool check_monotone_measure(const std::vector<SymMatrix>& atoms, double tol = kDefaultTol);

// x_k = K * integral of M_mu over [(k-1)/K, k/K], exact over cut overlaps.
ConePoint discretize(const DiscreteMonotoneMeasure& mu, int K);

// E[|M_mu(U) - M_nu(U)|^p]^(1/p) over the merged cut partition, p in {1,2}.
double coupling_distance(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                         int power = 1);

// Cost functions satisfying the rectangle (Monge) condition.
struct MongeCost {
  std::function<double(const SymMatrix&, const SymMatrix&)> c;
  static MongeCost squared_distance();
  static MongeCost convex_of_difference(std::function<double(const SymMatrix&)> phi);
};

// Brute-force optimal-transport oracle: enumerates the vertices of the
// transport polytope (northwest-corner rule over all row/column orders) and
// checks that the comonotone coupling cost is minimal within tol.
// Requires <= 4 atoms per measure.
bool transport_optimality_check(const DiscreteMonotoneMeasure& mu,
                                const DiscreteMonotoneMeasure& nu, const MongeCost& cost,
                                double tol = 1e-9);

// Comonotone coupling cost E[c(M_mu(U), M_nu(U))], exact over the merged
// partition.
double comonotone_cost(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                       const MongeCost& cost);

// K-level cut-point coarsening: the law of M_mu(floor(K u)/K).
DiscreteMonotoneMeasure coarsen(const DiscreteMonotoneMeasure& mu, int K);

// Pointwise order of the quantile paths: M_mu(u) <= M_nu(u) for all u.
bool pointwise_leq(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                   double tol = kDefaultTol);

// Tail-integral order: int_u^1 M_mu <= int_u^1 M_nu for every u (checked at
// the merged cut points; the integrals are piecewise linear in u).
bool tail_integral_leq(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                       double tol = kDefaultTol);

}  // namespace hjcone
