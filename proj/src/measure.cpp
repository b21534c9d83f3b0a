#include "hjcone/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hjcone {

DiscreteMonotoneMeasure::DiscreteMonotoneMeasure(int d, std::vector<double> c,
                                                 std::vector<SymMatrix> a, double tol)
    : dim(d), cuts(std::move(c)), atoms(std::move(a)) {
  if (cuts.size() < 2 || atoms.size() + 1 != cuts.size())
    throw std::invalid_argument("measure: cuts/atoms size mismatch");
  if (std::abs(cuts.front()) > 1e-15 || std::abs(cuts.back() - 1.0) > 1e-15)
    throw std::invalid_argument("measure: cuts must span [0,1]");
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) throw std::invalid_argument("measure: cuts not increasing");
  }
  for (const auto& q : atoms) {
    if (q.dim() != dim) throw std::invalid_argument("measure: atom dim mismatch");
    if (!is_psd(q, tol)) throw std::invalid_argument("measure: atom not PSD");
  }
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    if (!psd_leq(atoms[k], atoms[k + 1], tol))
      throw std::invalid_argument("measure: atoms not a PSD chain");
  }
}

DiscreteMonotoneMeasure DiscreteMonotoneMeasure::dirac(const SymMatrix& q) {
  return DiscreteMonotoneMeasure(q.dim(), {0.0, 1.0}, {q});
}

DiscreteMonotoneMeasure DiscreteMonotoneMeasure::from_weights(const std::vector<SymMatrix>& atoms,
                                                              const std::vector<double>& weights,
                                                              double tol) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw std::invalid_argument("from_weights: size mismatch");
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("from_weights: weights must sum to 1");
  std::vector<double> cuts{0.0};
  double acc = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("from_weights: nonpositive weight");
    acc += w;
    cuts.push_back(acc);
  }
  cuts.back() = 1.0;
  return DiscreteMonotoneMeasure(atoms[0].dim(), std::move(cuts), atoms, tol);
}

DiscreteMonotoneMeasure DiscreteMonotoneMeasure::canonical(double tol) const {
  std::vector<double> c{0.0};
  std::vector<SymMatrix> a;
  for (int k = 0; k < levels(); ++k) {
    if (!a.empty() && (atoms[k] - a.back()).norm() <= tol) {
      c.back() = cuts[k + 1];
    } else {
      a.push_back(atoms[k]);
      c.push_back(cuts[k + 1]);
    }
  }
  return DiscreteMonotoneMeasure(dim, std::move(c), std::move(a));
}

double DiscreteMonotoneMeasure::second_moment() const {
  double s = 0.0;
  for (int k = 0; k < levels(); ++k) s += weight(k) * atoms[k].norm() * atoms[k].norm();
  return s;
}

const SymMatrix& eval_M(const DiscreteMonotoneMeasure& mu, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("eval_M: u outside [0,1)");
  // right-continuous: atoms[k] for u in [cuts[k], cuts[k+1])
  const auto it = std::upper_bound(mu.cuts.begin(), mu.cuts.end(), u);
  const int k = static_cast<int>(it - mu.cuts.begin()) - 1;
  return mu.atoms[std::min(k, mu.levels() - 1)];
}

ScalarQuantile::ScalarQuantile(std::vector<double> s, std::vector<double> c)
    : support(std::move(s)), cdf(std::move(c)) {
  if (support.empty() || support.size() != cdf.size())
    throw std::invalid_argument("ScalarQuantile: size mismatch");
  for (std::size_t i = 0; i + 1 < support.size(); ++i) {
    if (!(support[i] < support[i + 1]))
      throw std::invalid_argument("ScalarQuantile: support not increasing");
    if (cdf[i] > cdf[i + 1] + 1e-15) throw std::invalid_argument("ScalarQuantile: cdf decreasing");
  }
  if (std::abs(cdf.back() - 1.0) > 1e-12) throw std::invalid_argument("ScalarQuantile: cdf must end at 1");
}

double scalar_quantile(const ScalarQuantile& q, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("scalar_quantile: u outside (0,1]");
  for (std::size_t i = 0; i < q.support.size(); ++i) {
    if (q.cdf[i] >= u - 1e-12) return q.support[i];
  }
  return q.support.back();
}

bool check_monotone_pair(const std::vector<WeightedPair>& samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("check_monotone_pair: empty sample set");
  double total = 0.0;
  for (const auto& s : samples) total += s.w;
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("check_monotone_pair: weights must sum to 1");

  std::set<double> xs, ys;
  for (const auto& s : samples) {
    xs.insert(s.x);
    ys.insert(s.y);
  }
  for (double x : xs) {
    for (double y : ys) {
      double joint = 0.0, fx = 0.0, fy = 0.0;
      for (const auto& s : samples) {
        if (s.x <= x && s.y <= y) joint += s.w;
        if (s.x <= x) fx += s.w;
        if (s.y <= y) fy += s.w;
      }
      if (std::abs(joint - std::min(fx, fy)) > tol) return false;
    }
  }
  return true;
}

bool check_monotone_measure(const std::vector<SymMatrix>& atoms, double tol) {
  if (atoms.empty()) throw std::invalid_argument("check_monotone_measure: empty atom list");
  for (const auto& a : atoms) {
    if (!is_psd(a, tol)) throw std::invalid_argument("check_monotone_measure: non-PSD atom");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (!psd_leq(atoms[i], atoms[j], tol) && !psd_leq(atoms[j], atoms[i], tol)) return false;
    }
  }
  return true;
}

ConePoint discretize(const DiscreteMonotoneMeasure& mu, int K) {
  if (K < 1) throw std::invalid_argument("discretize: K must be >= 1");
  ConePoint x = ConePoint::zero(K, mu.dim);
  for (int k = 0; k < K; ++k) {
    const double lo = static_cast<double>(k) / K;
    const double hi = static_cast<double>(k + 1) / K;
    SymMatrix acc = SymMatrix::zero(mu.dim);
    for (int l = 0; l < mu.levels(); ++l) {
      const double ov = std::max(0.0, std::min(hi, mu.cuts[l + 1]) - std::max(lo, mu.cuts[l]));
      if (ov > 0.0) acc += mu.atoms[l] * ov;
    }
    x.parts[k] = acc * static_cast<double>(K);
  }
  return x;
}

namespace {

// merged partition of [0,1] from both cut vectors
std::vector<double> merged_cuts(const DiscreteMonotoneMeasure& mu,
                                const DiscreteMonotoneMeasure& nu) {
  std::vector<double> m;
  m.reserve(mu.cuts.size() + nu.cuts.size());
  std::merge(mu.cuts.begin(), mu.cuts.end(), nu.cuts.begin(), nu.cuts.end(),
             std::back_inserter(m));
  m.erase(std::unique(m.begin(), m.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
          m.end());
  return m;
}

}  // namespace

double coupling_distance(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                         int power) {
  if (mu.dim != nu.dim) throw std::invalid_argument("coupling_distance: dimension mismatch");
  if (power != 1 && power != 2) throw std::invalid_argument("coupling_distance: power must be 1 or 2");
  const auto cuts = merged_cuts(mu, nu);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double d = (eval_M(mu, mid) - eval_M(nu, mid)).norm();
    acc += len * (power == 1 ? d : d * d);
  }
  return power == 1 ? acc : std::sqrt(acc);
}

MongeCost MongeCost::squared_distance() {
  return MongeCost{[](const SymMatrix& x, const SymMatrix& y) {
    const double d = (x - y).norm();
    return d * d;
  }};
}

MongeCost MongeCost::convex_of_difference(std::function<double(const SymMatrix&)> phi) {
  return MongeCost{[phi = std::move(phi)](const SymMatrix& x, const SymMatrix& y) {
    return phi(x - y);
  }};
}

double comonotone_cost(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                       const MongeCost& cost) {
  const auto cuts = merged_cuts(mu, nu);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += len * cost.c(eval_M(mu, mid), eval_M(nu, mid));
  }
  return acc;
}

bool transport_optimality_check(const DiscreteMonotoneMeasure& mu,
                                const DiscreteMonotoneMeasure& nu, const MongeCost& cost,
                                double tol) {
  const int m = mu.levels();
  const int n = nu.levels();
  if (m > 4 || n > 4)
    throw std::invalid_argument("transport_optimality_check: atom count too large for brute force");
  std::vector<double> a(m), b(n);
  for (int i = 0; i < m; ++i) a[i] = mu.weight(i);
  for (int j = 0; j < n; ++j) b[j] = nu.weight(j);

  // Every vertex of the transportation polytope arises from the
  // northwest-corner rule under some ordering of rows and columns.
  std::vector<int> rows(m), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> rp = rows;
  do {
    std::vector<int> cp = cols;
    do {
      std::vector<double> ra = a, cb = b;
      double c = 0.0;
      int i = 0, j = 0;
      while (i < m && j < n) {
        const int r = rp[i], s = cp[j];
        const double t = std::min(ra[r], cb[s]);
        if (t > 0.0) c += t * cost.c(mu.atoms[r], nu.atoms[s]);
        ra[r] -= t;
        cb[s] -= t;
        if (ra[r] <= 1e-15)
          ++i;
        else
          ++j;
      }
      best = std::min(best, c);
    } while (std::next_permutation(cp.begin(), cp.end()));
  } while (std::next_permutation(rp.begin(), rp.end()));

  return comonotone_cost(mu, nu, cost) <= best + tol;
}

DiscreteMonotoneMeasure coarsen(const DiscreteMonotoneMeasure& mu, int K) {
  if (K < 1) throw std::invalid_argument("coarsen: K must be >= 1");
  std::vector<SymMatrix> atoms;
  std::vector<double> weights;
  for (int k = 0; k < K; ++k) {
    atoms.push_back(eval_M(mu, static_cast<double>(k) / K));
    weights.push_back(1.0 / K);
  }
  return DiscreteMonotoneMeasure::from_weights(atoms, weights).canonical();
}

bool pointwise_leq(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                   double tol) {
  const auto cuts = merged_cuts(mu, nu);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (!psd_leq(eval_M(mu, mid), eval_M(nu, mid), tol)) return false;
  }
  return true;
}

bool tail_integral_leq(const DiscreteMonotoneMeasure& mu, const DiscreteMonotoneMeasure& nu,
                       double tol) {
  const auto cuts = merged_cuts(mu, nu);
  SymMatrix tail = SymMatrix::zero(mu.dim);  // int_u^1 (M_nu - M_mu), from the right
  if (!is_psd(tail, tol)) return false;
  for (std::size_t i = cuts.size() - 1; i-- > 0;) {
    const double len = cuts[i + 1] - cuts[i];
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    tail += (eval_M(nu, mid) - eval_M(mu, mid)) * len;
    if (!is_psd(tail, tol)) return false;
  }
  return true;
}

}  // namespace hjcone
