#include "hjcone/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hjcone/rng.hpp"

namespace hjcone {

double ChainHamiltonian::value_on_cone(const ConePoint& p, double tol) const {
  if (p.K() != K) throw std::invalid_argument("ChainHamiltonian: K mismatch");
  if (!in_closure(p, tol)) throw std::invalid_argument("ChainHamiltonian: p outside the chain cone");
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += xibar.eval(p.parts[k] * static_cast<double>(K));
  return s / static_cast<double>(K);
}

namespace {

double objective(const RegularizedXi& xibar, int K, const ConePoint& q) {
  double s = 0.0;
  for (int k = 0; k < K; ++k) s += xibar.eval(q.parts[k] * static_cast<double>(K));
  return s / static_cast<double>(K);
}

ConePoint objective_grad(const RegularizedXi& xibar, int K, const ConePoint& q) {
  ConePoint g = ConePoint::zero(K, q.dim());
  for (int k = 0; k < K; ++k) g.parts[k] = xibar.grad(q.parts[k] * static_cast<double>(K));
  return g;
}

}  // namespace

namespace {

// scalar isotonic projection onto {0 <= x_1 <= ... <= x_n} (PAVA + clamp)
void pava_nonneg(const double* y, int n, double* out) {
  double level[64], weight[64];
  int len[64];
  int top = 0;
  for (int i = 0; i < n; ++i) {
    level[top] = y[i];
    weight[top] = 1.0;
    len[top] = 1;
    ++top;
    while (top > 1 && level[top - 2] > level[top - 1]) {
      const double w = weight[top - 2] + weight[top - 1];
      level[top - 2] = (weight[top - 2] * level[top - 2] + weight[top - 1] * level[top - 1]) / w;
      weight[top - 2] = w;
      len[top - 2] += len[top - 1];
      --top;
    }
  }
  int pos = 0;
  for (int b = 0; b < top; ++b)
    for (int r = 0; r < len[b]; ++r) out[pos++] = std::max(level[b], 0.0);
}

// Dykstra projection onto {chain} \cap {tail sums >= tail sums of shift},
// scalar coordinates. Chain projection is exact (PAVA); each tail constraint
// is a half-space.
struct ScalarFeasProjector {
  int n;
  const double* shift_tail;  // c_k = sum_{l>=k} shift_l
  double work[64], corr_chain[64], corr_tail[64 * 64];

  void project(double* x) {
    const int max_iter = 4000;
    std::fill(corr_chain, corr_chain + n, 0.0);
    std::fill(corr_tail, corr_tail + n * n, 0.0);
    double scale = 1.0;
    for (int k = 0; k < n; ++k) scale += std::abs(x[k]) + std::abs(shift_tail[k]);
    for (int it = 0; it < max_iter; ++it) {
      double moved = 0.0;
      // chain set
      for (int k = 0; k < n; ++k) work[k] = x[k] + corr_chain[k];
      double proj[64];
      pava_nonneg(work, n, proj);
      for (int k = 0; k < n; ++k) {
        corr_chain[k] = work[k] - proj[k];
        moved += std::abs(x[k] - proj[k]);
        x[k] = proj[k];
      }
      // tail half-spaces
      for (int c = 0; c < n; ++c) {
        double* cc = corr_tail + c * n;
        double s = 0.0;
        for (int k = c; k < n; ++k) {
          work[k] = x[k] + cc[k];
          s += work[k];
        }
        const double deficit = shift_tail[c] - s;
        const double add = deficit > 0.0 ? deficit / (n - c) : 0.0;
        for (int k = c; k < n; ++k) {
          const double nv = work[k] + add;
          cc[k] = work[k] - nv;
          moved += std::abs(x[k] - nv);
          x[k] = nv;
        }
      }
      if (moved < 1e-12 * scale) break;
    }
  }
};

}  // namespace

double ChainHamiltonian::value_extended_scalar(const double* p, int n, std::uint64_t seed) const {
  if (n != K || n > 64) throw std::invalid_argument("value_extended_scalar: bad size");
  // on-cone short circuit
  bool on = p[0] >= -kDefaultTol;
  for (int k = 0; on && k + 1 < n; ++k) on = p[k + 1] >= p[k] - kDefaultTol;
  if (on) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += xibar.eval_scalar(K * std::max(p[k], 0.0));
    return s / K;
  }

  double tails[64];
  {
    double acc = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      acc += p[k];
      tails[k] = acc;
    }
  }
  ScalarFeasProjector proj{n, tails};

  double base[64];
  pava_nonneg(p, n, base);
  proj.project(base);

  double scale = 1.0;
  for (int k = 0; k < n; ++k) scale += std::abs(p[k]);

  auto rng = make_engine(seed, 0xacceULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto fval = [&](const double* q) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += xibar.eval_scalar(K * q[k]);
    return s / K;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int s0 = 0; s0 < 8; ++s0) {
    double q[64];
    std::copy(base, base + n, q);
    if (s0 > 0) {
      // random dual-cone shift: prescribe extra PSD tail increments
      double extra = 0.05 + 0.55 * u(rng);
      double prev = 0.0;
      for (int k = n - 1; k >= 0; --k) {
        const double t = extra * scale * u(rng);
        q[k] += t - prev;
        prev = t;
      }
      proj.project(q);
    }
    double fq = fval(q);
    for (int it = 0; it < 10000; ++it) {
      double g[64], gn = 0.0;
      for (int k = 0; k < n; ++k) {
        g[k] = xibar.grad_scalar(K * q[k]);
        gn += g[k] * g[k];
      }
      gn = std::sqrt(gn);
      if (gn < 1e-14) break;
      double step = 0.25 * scale / gn;
      bool accepted = false;
      while (step > 1e-12) {
        double qn[64];
        for (int k = 0; k < n; ++k) qn[k] = q[k] - step * g[k];
        proj.project(qn);
        const double fn = fval(qn);
        if (fn < fq - 1e-14) {
          double moved = 0.0;
          for (int k = 0; k < n; ++k) moved += std::abs(qn[k] - q[k]);
          std::copy(qn, qn + n, q);
          fq = fn;
          accepted = true;
          if (moved < 1e-10 * scale) it = 10000;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    best = std::min(best, fq);
  }
  return best;
}

double ChainHamiltonian::value_extended(const ConePoint& p, std::uint64_t seed) const {
  if (p.K() != K) throw std::invalid_argument("ChainHamiltonian: K mismatch");
  if (p.dim() == 1) {
    double buf[64];
    for (int k = 0; k < p.K(); ++k) buf[k] = p.parts[k](0, 0);
    return value_extended_scalar(buf, p.K(), seed);
  }
  if (in_closure(p, kDefaultTol)) return value_on_cone(project_closure(p), 1e-6);

  const int D = p.dim();
  auto feas = [&](const ConePoint& q) { return project_chain_and_shifted_dual(q, p); };

  // xibar may be nonconvex over the feasible region, so descend from several
  // starts: the cone projection of p, and dual-cone shifts away from it.
  const ConePoint base = feas(project_closure(p));
  const double scale = 1.0 + p.norm();
  auto rng = make_engine(seed, 0xacceULL);

  double best = std::numeric_limits<double>::infinity();
  const int starts = 8;
  for (int s = 0; s < starts; ++s) {
    ConePoint q = base;
    if (s > 0) {
      std::uniform_real_distribution<double> u(0.05, 0.6);
      q = feas(base + random_dual_element(rng, K, D, u(rng) * scale));
    }
    double fq = objective(xibar, K, q);
    for (int it = 0; it < 10000; ++it) {
      const ConePoint g = objective_grad(xibar, K, q);
      const double gn = g.norm();
      if (gn < 1e-14) break;
      double step = 0.25 * scale / gn;
      bool accepted = false;
      while (step > 1e-12) {
        const ConePoint qn = feas(q - g * step);
        const double fn = objective(xibar, K, qn);
        if (fn < fq - 1e-14) {
          const double moved = (qn - q).norm();
          q = qn;
          fq = fn;
          accepted = true;
          if (moved < 1e-10 * scale) it = 10000;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    best = std::min(best, fq);
  }
  return best;
}

double ChainHamiltonian::slope_bound(double radius) const {
  // Largest gradient entry of xibar over PSD arguments with |a| <= K*radius;
  // 2L always bounds the linear branch.
  const int D = xibar.base.dim();
  double m = 0.0;
  const double r = static_cast<double>(K) * radius;
  for (int i = 0; i < 256; ++i) {
    const auto x = kronecker_point(static_cast<std::size_t>(i), static_cast<std::size_t>(D * (D + 1) / 2 + 1));
    Eigen::MatrixXd S(D, D);
    std::size_t c = 0;
    for (int a = 0; a < D; ++a)
      for (int b = a; b < D; ++b) S(a, b) = S(b, a) = 2.0 * x[c++] - 1.0;
    SymMatrix q = psd_clamp(SymMatrix::from_dense(S));
    if (q.norm() < 1e-12) continue;
    q = q * (r * x[D * (D + 1) / 2] / q.norm());
    const SymMatrix g = xibar.grad(q);
    m = std::max(m, g.mat().cwiseAbs().maxCoeff());
  }
  return std::min(1.05 * m + 1e-6, 2.0 * xibar.L + 1e-6);
}

ConePoint refine(const ConePoint& p, int R) {
  if (R < 1) throw std::invalid_argument("refine: R must be >= 1");
  ConePoint out;
  out.parts.reserve(static_cast<std::size_t>(p.K()) * R);
  for (int k = 0; k < p.K(); ++k) {
    const SymMatrix blk = p.parts[k] * (1.0 / static_cast<double>(R));
    for (int r = 0; r < R; ++r) out.parts.push_back(blk);
  }
  return out;
}

}  // namespace hjcone
