#include "hjcone/cone.hpp"

#include <cmath>
#include <stdexcept>

namespace hjcone {

namespace {

void check_compatible(const ConePoint& a, const ConePoint& b, const char* what) {
  if (a.K() != b.K() || a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

// Exact projection of a scalar vector onto {0 <= x_1 <= ... <= x_K}:
// isotonic regression (PAVA) followed by the lower-bound clamp.
std::vector<double> isotonic_nonneg(const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> level(n), weight(n);
  std::vector<int> len(n);
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
  std::vector<double> out;
  out.reserve(n);
  for (int b = 0; b < top; ++b)
    for (int r = 0; r < len[b]; ++r) out.push_back(std::max(level[b], 0.0));
  return out;
}

// Projection onto {(u,v) : v - u PSD}: shift the pair by half the negative
// part of the difference.
void project_pair_gap(SymMatrix& u, SymMatrix& v) {
  const SymMatrix d = v - u;
  const SymMatrix dplus = psd_clamp(d);
  const SymMatrix corr = (dplus - d) * 0.5;  // = negative part / 2
  u = u - corr;
  v = v + corr;
}

}  // namespace

ConePoint ConePoint::zero(int K, int dim) {
  std::vector<SymMatrix> p(K, SymMatrix::zero(dim));
  return ConePoint(std::move(p));
}

ConePoint ConePoint::from_scalars(const std::vector<double>& v) {
  std::vector<SymMatrix> p;
  p.reserve(v.size());
  for (double x : v) p.push_back(SymMatrix::scalar(x));
  return ConePoint(std::move(p));
}

ConePoint ConePoint::operator+(const ConePoint& o) const {
  check_compatible(*this, o, "ConePoint::+");
  ConePoint r = *this;
  for (int k = 0; k < K(); ++k) r.parts[k] += o.parts[k];
  return r;
}

ConePoint ConePoint::operator-(const ConePoint& o) const {
  check_compatible(*this, o, "ConePoint::-");
  ConePoint r = *this;
  for (int k = 0; k < K(); ++k) r.parts[k] = r.parts[k] - o.parts[k];
  return r;
}

ConePoint ConePoint::operator*(double s) const {
  ConePoint r = *this;
  for (auto& p : r.parts) p = p * s;
  return r;
}

double ConePoint::norm() const {
  double s = 0.0;
  for (const auto& p : parts) s += p.norm() * p.norm();
  return std::sqrt(s);
}

double frob_dot(const ConePoint& a, const ConePoint& b) {
  check_compatible(a, b, "frob_dot(ConePoint)");
  double s = 0.0;
  for (int k = 0; k < a.K(); ++k) s += frob_dot(a.parts[k], b.parts[k]);
  return s;
}

bool in_closure(const ConePoint& x, double tol) {
  if (x.K() == 0) return true;
  if (!is_psd(x.parts[0], tol)) return false;
  for (int k = 0; k + 1 < x.K(); ++k) {
    if (!psd_leq(x.parts[k], x.parts[k + 1], tol)) return false;
  }
  return true;
}

bool in_dual(const ConePoint& x, double tol) {
  if (x.K() == 0) return true;
  SymMatrix tail = SymMatrix::zero(x.dim());
  for (int k = x.K() - 1; k >= 0; --k) {
    tail += x.parts[k];
    if (!is_psd(tail, tol)) return false;
  }
  return true;
}

ConePoint project_closure(const ConePoint& p, double residual_tol, int max_iter) {
  const int K = p.K();
  const int d = p.dim();
  if (K == 0) return p;

  if (d == 1) {
    std::vector<double> y(K);
    for (int k = 0; k < K; ++k) y[k] = p.parts[k](0, 0);
    return ConePoint::from_scalars(isotonic_nonneg(y));
  }

  // Dykstra over the K constraint sets {x_1 >= 0}, {x_{k+1} - x_k >= 0}.
  ConePoint x = p;
  std::vector<ConePoint> corr(K, ConePoint::zero(K, d));
  const double scale = 1.0 + p.norm();
  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (int c = 0; c < K; ++c) {
      ConePoint y = x + corr[c];
      ConePoint before = y;
      if (c == 0) {
        y.parts[0] = psd_clamp(y.parts[0]);
      } else {
        project_pair_gap(y.parts[c - 1], y.parts[c]);
      }
      corr[c] = before - y;
      moved += (x - y).norm();
      x = y;
    }
    if (moved < residual_tol * scale && in_closure(x, 1e-7 * scale)) return x;
  }
  throw std::runtime_error("project_closure: Dykstra did not converge");
}

ConePoint project_chain_and_shifted_dual(const ConePoint& p, const ConePoint& shift,
                                         double residual_tol, int max_iter) {
  check_compatible(p, shift, "project_chain_and_shifted_dual");
  const int K = p.K();
  const int d = p.dim();
  // Precompute tail sums of the shift: t_k = sum_{l>=k} shift_l.
  std::vector<SymMatrix> shift_tail(K, SymMatrix::zero(d));
  {
    SymMatrix acc = SymMatrix::zero(d);
    for (int k = K - 1; k >= 0; --k) {
      acc += shift.parts[k];
      shift_tail[k] = acc;
    }
  }

  ConePoint x = p;
  const int nsets = 2 * K;
  std::vector<ConePoint> corr(nsets, ConePoint::zero(K, d));
  const double scale = 1.0 + p.norm() + shift.norm();

  auto feasible = [&](const ConePoint& q, double tol) {
    if (!in_closure(q, tol)) return false;
    SymMatrix tail = SymMatrix::zero(d);
    for (int k = K - 1; k >= 0; --k) {
      tail += q.parts[k] - shift.parts[k];
      if (!is_psd(tail, tol)) return false;
    }
    return true;
  };

  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (int c = 0; c < nsets; ++c) {
      ConePoint y = x + corr[c];
      ConePoint before = y;
      if (c < K) {
        if (c == 0) {
          y.parts[0] = psd_clamp(y.parts[0]);
        } else {
          project_pair_gap(y.parts[c - 1], y.parts[c]);
        }
      } else {
        // Tail constraint sum_{l>=k}(x_l - shift_l) >= 0; the linear map
        // B_k x = sum_{l>=k} x_l has B_k B_k* = (K-k) I, so the projection
        // spreads the PSD correction evenly over the tail coordinates.
        const int k = c - K;
        SymMatrix s = SymMatrix::zero(d);
        for (int l = k; l < K; ++l) s += y.parts[l];
        s = s - shift_tail[k];
        const SymMatrix splus = psd_clamp(s);
        const SymMatrix w = (splus - s) * (1.0 / static_cast<double>(K - k));
        for (int l = k; l < K; ++l) y.parts[l] += w;
      }
      corr[c] = before - y;
      moved += (x - y).norm();
      x = y;
    }
    if (moved < residual_tol * scale && feasible(x, 1e-7 * scale)) return x;
  }
  throw std::runtime_error("project_chain_and_shifted_dual: Dykstra did not converge");
}

std::vector<SymMatrix> normal_cone_psd(const SymMatrix& x, double tol) {
  if (!is_psd(x, tol)) throw std::invalid_argument("normal_cone_psd: x not PSD");
  const auto [vals, vecs] = eigen_sym(x);
  std::vector<SymMatrix> gens;
  for (int i = 0; i < x.dim(); ++i) {
    if (vals(i) <= std::max(tol, 1e-12 * x.norm())) {
      Eigen::VectorXd v = vecs.col(i);
      gens.push_back(SymMatrix::from_dense(-(v * v.transpose())));
    }
  }
  return gens;
}

double norm_2star(const ConePoint& p) {
  return std::sqrt(static_cast<double>(p.K())) * p.norm();
}

ConePoint random_dual_element(std::mt19937_64& rng, int K, int dim, double scale) {
  // General dual element: prescribe PSD tail sums T_k and difference them,
  // x_k = T_k - T_{k+1}. The coordinates themselves need not be PSD.
  std::vector<SymMatrix> tails;
  tails.reserve(K + 1);
  for (int k = 0; k < K; ++k) tails.push_back(random_psd(rng, dim, scale));
  tails.push_back(SymMatrix::zero(dim));
  ConePoint x = ConePoint::zero(K, dim);
  for (int k = 0; k < K; ++k) x.parts[k] = tails[k] - tails[k + 1];
  return x;
}

}  // namespace hjcone
