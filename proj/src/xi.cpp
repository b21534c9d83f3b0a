#include "hjcone/xi.hpp"

#include <cmath>
#include <stdexcept>

#include "hjcone/rng.hpp"

namespace hjcone {

namespace {

bool dense_psd(const Eigen::MatrixXd& C, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
  return es.eigenvalues()(0) >= -std::max(tol, 1e-12 * C.norm());
}

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// digits of every multi-index in {0..D-1}^p, row-major
std::vector<std::vector<int>> multi_indices(int D, int p) {
  const int n = ipow(D, p);
  std::vector<std::vector<int>> out(n, std::vector<int>(p));
  for (int t = 0; t < n; ++t) {
    int v = t;
    for (int j = p - 1; j >= 0; --j) {
      out[t][j] = v % D;
      v /= D;
    }
  }
  return out;
}

}  // namespace

XiModel XiModel::schur_power(int p, const Eigen::MatrixXd& C, double tol) {
  if (p < 1) throw std::invalid_argument("schur_power: p must be >= 1");
  if (C.rows() != C.cols()) throw std::invalid_argument("schur_power: C not square");
  if (!dense_psd(C, tol)) throw std::invalid_argument("schur_power: C not PSD");
  XiModel m;
  m.kind_ = Kind::SchurPower;
  m.dim_ = static_cast<int>(C.rows());
  m.p_ = p;
  m.C_ = 0.5 * (C + C.transpose());
  return m;
}

XiModel XiModel::schur_power_unchecked(int p, const Eigen::MatrixXd& C) {
  if (p < 1) throw std::invalid_argument("schur_power: p must be >= 1");
  if (C.rows() != C.cols()) throw std::invalid_argument("schur_power: C not square");
  XiModel m;
  m.kind_ = Kind::SchurPower;
  m.dim_ = static_cast<int>(C.rows());
  m.p_ = p;
  m.C_ = 0.5 * (C + C.transpose());
  return m;
}

XiModel XiModel::tensor_power(int p, int dim, const Eigen::MatrixXd& C, double tol) {
  if (p < 1) throw std::invalid_argument("tensor_power: p must be >= 1");
  const int side = ipow(dim, p);
  if (side > 4096) throw std::invalid_argument("tensor_power: D^p exceeds 4096");
  if (C.rows() != side || C.cols() != side)
    throw std::invalid_argument("tensor_power: C side must be D^p");
  if (!dense_psd(C, tol)) throw std::invalid_argument("tensor_power: C not PSD");
  XiModel m;
  m.kind_ = Kind::TensorPower;
  m.dim_ = dim;
  m.p_ = p;
  m.C_ = 0.5 * (C + C.transpose());
  return m;
}

XiModel XiModel::multitype(const Eigen::MatrixXd& C, double tol) {
  const int side = static_cast<int>(C.rows());
  const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(side))));
  if (dim * dim != side || C.cols() != side)
    throw std::invalid_argument("multitype: C side must be D^2");
  if (!dense_psd(C, tol)) throw std::invalid_argument("multitype: C not PSD");
  XiModel m;
  m.kind_ = Kind::Multitype;
  m.dim_ = dim;
  m.p_ = 2;
  m.C_ = 0.5 * (C + C.transpose());
  return m;
}

XiModel XiModel::weighted_sum(std::vector<std::pair<double, XiModel>> terms) {
  if (terms.empty()) throw std::invalid_argument("weighted_sum: empty");
  const int dim = terms[0].second.dim();
  for (const auto& [c, t] : terms) {
    if (c < 0.0) throw std::invalid_argument("weighted_sum: negative coefficient");
    if (t.dim() != dim) throw std::invalid_argument("weighted_sum: dim mismatch");
  }
  XiModel m;
  m.kind_ = Kind::WeightedSum;
  m.dim_ = dim;
  m.terms_ = std::move(terms);
  return m;
}

double XiModel::eval(const Eigen::MatrixXd& A) const {
  if (A.rows() != dim_ || A.cols() != dim_) throw std::invalid_argument("xi eval: dimension mismatch");
  switch (kind_) {
    case Kind::SchurPower: {
      double s = 0.0;
      for (int d = 0; d < dim_; ++d)
        for (int e = 0; e < dim_; ++e) s += C_(d, e) * std::pow(A(d, e), p_);
      return s;
    }
    case Kind::Multitype: {
      double s = 0.0;
      for (int d1 = 0; d1 < dim_; ++d1)
        for (int d2 = 0; d2 < dim_; ++d2)
          for (int e1 = 0; e1 < dim_; ++e1)
            for (int e2 = 0; e2 < dim_; ++e2)
              s += C_(d1 * dim_ + d2, e1 * dim_ + e2) * A(d1, e1) * A(d2, e2);
      return s;
    }
    case Kind::TensorPower: {
      const auto idx = multi_indices(dim_, p_);
      const int n = static_cast<int>(idx.size());
      double s = 0.0;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          if (C_(r, c) == 0.0) continue;
          double prod = 1.0;
          for (int j = 0; j < p_; ++j) prod *= A(idx[r][j], idx[c][j]);
          s += C_(r, c) * prod;
        }
      }
      return s;
    }
    case Kind::WeightedSum: {
      double s = 0.0;
      for (const auto& [c, t] : terms_) s += c * t.eval(A);
      return s;
    }
  }
  return 0.0;
}

Eigen::MatrixXd XiModel::grad(const Eigen::MatrixXd& A) const {
  if (A.rows() != dim_ || A.cols() != dim_) throw std::invalid_argument("xi grad: dimension mismatch");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim_, dim_);
  switch (kind_) {
    case Kind::SchurPower: {
      for (int d = 0; d < dim_; ++d)
        for (int e = 0; e < dim_; ++e)
          g(d, e) = p_ * C_(d, e) * (p_ == 1 ? 1.0 : std::pow(A(d, e), p_ - 1));
      return g;
    }
    case Kind::Multitype: {
      for (int a = 0; a < dim_; ++a) {
        for (int b = 0; b < dim_; ++b) {
          double s = 0.0;
          for (int d = 0; d < dim_; ++d)
            for (int e = 0; e < dim_; ++e)
              s += C_(a * dim_ + d, b * dim_ + e) * A(d, e) + C_(d * dim_ + a, e * dim_ + b) * A(d, e);
          g(a, b) = s;
        }
      }
      return g;
    }
    case Kind::TensorPower: {
      const auto idx = multi_indices(dim_, p_);
      const int n = static_cast<int>(idx.size());
      std::vector<double> pref(p_ + 1), suff(p_ + 1);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          if (C_(r, c) == 0.0) continue;
          pref[0] = 1.0;
          for (int j = 0; j < p_; ++j) pref[j + 1] = pref[j] * A(idx[r][j], idx[c][j]);
          suff[p_] = 1.0;
          for (int j = p_ - 1; j >= 0; --j) suff[j] = suff[j + 1] * A(idx[r][j], idx[c][j]);
          for (int j = 0; j < p_; ++j)
            g(idx[r][j], idx[c][j]) += C_(r, c) * pref[j] * suff[j + 1];
        }
      }
      return g;
    }
    case Kind::WeightedSum: {
      for (const auto& [c, t] : terms_) g += c * t.grad(A);
      return g;
    }
  }
  return g;
}

double XiModel::eval_scalar(double a) const {
  if (dim_ != 1) throw std::invalid_argument("eval_scalar: dim != 1");
  switch (kind_) {
    case Kind::SchurPower:
    case Kind::TensorPower:
      return C_(0, 0) * std::pow(a, p_);
    case Kind::Multitype:
      return C_(0, 0) * a * a;
    case Kind::WeightedSum: {
      double s = 0.0;
      for (const auto& [c, t] : terms_) s += c * t.eval_scalar(a);
      return s;
    }
  }
  return 0.0;
}

double XiModel::grad_scalar(double a) const {
  if (dim_ != 1) throw std::invalid_argument("grad_scalar: dim != 1");
  switch (kind_) {
    case Kind::SchurPower:
    case Kind::TensorPower:
      return p_ * C_(0, 0) * (p_ == 1 ? 1.0 : std::pow(a, p_ - 1));
    case Kind::Multitype:
      return 2.0 * C_(0, 0) * a;
    case Kind::WeightedSum: {
      double s = 0.0;
      for (const auto& [c, t] : terms_) s += c * t.grad_scalar(a);
      return s;
    }
  }
  return 0.0;
}

XiModel XiModel::as_tensor() const {
  switch (kind_) {
    case Kind::TensorPower:
      return *this;
    case Kind::Multitype:
      return tensor_power(2, dim_, C_);
    case Kind::SchurPower: {
      const int side = ipow(dim_, p_);
      if (side > 4096) throw std::invalid_argument("as_tensor: D^p exceeds 4096");
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(side, side);
      auto rep = [&](int d) {
        int t = 0;
        for (int j = 0; j < p_; ++j) t = t * dim_ + d;
        return t;
      };
      for (int d = 0; d < dim_; ++d)
        for (int e = 0; e < dim_; ++e) C(rep(d), rep(e)) = C_(d, e);
      return tensor_power(p_, dim_, C);
    }
    case Kind::WeightedSum: {
      std::vector<std::pair<double, XiModel>> ts;
      for (const auto& [c, t] : terms_) ts.emplace_back(c, t.as_tensor());
      return weighted_sum(std::move(ts));
    }
  }
  throw std::logic_error("as_tensor: unreachable");
}

XiModel XiModel::product(const XiModel& a, const XiModel& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("product: dim mismatch");
  if (a.kind_ == Kind::WeightedSum) {
    std::vector<std::pair<double, XiModel>> ts;
    for (const auto& [c, t] : a.terms_) ts.emplace_back(c, product(t, b));
    return weighted_sum(std::move(ts));
  }
  if (b.kind_ == Kind::WeightedSum) {
    std::vector<std::pair<double, XiModel>> ts;
    for (const auto& [c, t] : b.terms_) ts.emplace_back(c, product(a, t));
    return weighted_sum(std::move(ts));
  }
  const XiModel ta = a.as_tensor();
  const XiModel tb = b.as_tensor();
  const int p = ta.p_ + tb.p_;
  if (ipow(a.dim(), p) > 4096) throw std::invalid_argument("product: D^(p+p') exceeds 4096");
  const long na = ta.C_.rows(), nb = tb.C_.rows();
  Eigen::MatrixXd C(na * nb, na * nb);
  for (long i = 0; i < na; ++i)
    for (long j = 0; j < na; ++j) C.block(i * nb, j * nb, nb, nb) = ta.C_(i, j) * tb.C_;
  return tensor_power(p, a.dim(), C);
}

PropernessReport is_proper_sampled(const XiModel& model, int n, double tol, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("is_proper_sampled: n must be >= 1");
  auto rng = make_engine(seed, 0x9c0fULL);
  std::uniform_real_distribution<double> u(0.1, 1.2);
  PropernessReport rep;
  const int D = model.dim();
  for (int i = 0; i < n; ++i) {
    const SymMatrix A = random_psd(rng, D, u(rng));
    const SymMatrix B = A + random_psd(rng, D, u(rng));
    const SymMatrix E = random_psd(rng, D, u(rng));
    const SymMatrix gA = SymMatrix::from_dense(model.grad(A.mat()));
    const SymMatrix gB = SymMatrix::from_dense(model.grad(B.mat()));
    const auto [vals, vecs] = eigen_sym(gA);
    if (vals(0) < -tol) {
      rep.proper = false;
      rep.witness = PropernessWitness{A, B, E, "gradient-eigenvalue"};
      return rep;
    }
    if (frob_dot(gB - gA, E) < -tol) {
      rep.proper = false;
      rep.witness = PropernessWitness{A, B, E, "increment"};
      return rep;
    }
  }
  return rep;
}

Convexity is_convex_criterion(const XiModel& model, double tol) {
  switch (model.kind()) {
    case XiModel::Kind::SchurPower: {
      const auto& C = model.coeff();
      if (model.power() == 1) return Convexity::Convex;  // linear
      if (model.power() % 2 == 0) {
        return (C.minCoeff() >= -tol) ? Convexity::Convex : Convexity::NonConvex;
      }
      double offdiag = 0.0;
      for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j)
          if (i != j) offdiag = std::max(offdiag, std::abs(C(i, j)));
      return (offdiag <= tol) ? Convexity::Convex : Convexity::NonConvex;
    }
    case XiModel::Kind::Multitype: {
      const int D = model.dim();
      const auto& C = model.coeff();
      Eigen::MatrixXd Chat(D * D, D * D);
      for (int d1 = 0; d1 < D; ++d1)
        for (int e1 = 0; e1 < D; ++e1)
          for (int d2 = 0; d2 < D; ++d2)
            for (int e2 = 0; e2 < D; ++e2)
              Chat(d1 * D + e1, d2 * D + e2) = C(d1 * D + d2, e1 * D + e2);
      return dense_psd(Chat, tol) ? Convexity::Convex : Convexity::NonConvex;
    }
    default:
      return Convexity::Unknown;
  }
}

double RegularizedXi::eval(const SymMatrix& a) const {
  const SymMatrix ap = psd_clamp(a);
  const int D = ap.dim();
  const double tr = ap.trace();
  const double linear = xi0 + 2.0 * L * (tr - static_cast<double>(D));
  if (tr <= 2.0 * D) return std::max(base.eval(ap.mat()), linear);
  return linear;
}

SymMatrix RegularizedXi::grad(const SymMatrix& a) const {
  const SymMatrix ap = psd_clamp(a);
  const int D = ap.dim();
  const double tr = ap.trace();
  const SymMatrix two_l_id = SymMatrix::identity(D) * (2.0 * L);
  if (tr > 2.0 * D) return two_l_id;
  const double linear = xi0 + 2.0 * L * (tr - static_cast<double>(D));
  if (base.eval(ap.mat()) >= linear) return SymMatrix::from_dense(base.grad(ap.mat()));
  return two_l_id;
}

double RegularizedXi::lipschitz_fro() const {
  return 2.0 * L * std::sqrt(static_cast<double>(base.dim()));
}

double RegularizedXi::eval_scalar(double a) const {
  a = std::max(a, 0.0);
  const double linear = xi0 + 2.0 * L * (a - 1.0);
  if (a <= 2.0) return std::max(base.eval_scalar(a), linear);
  return linear;
}

double RegularizedXi::grad_scalar(double a) const {
  a = std::max(a, 0.0);
  if (a > 2.0) return 2.0 * L;
  const double linear = xi0 + 2.0 * L * (a - 1.0);
  if (base.eval_scalar(a) >= linear) return base.grad_scalar(a);
  return 2.0 * L;
}

RegularizedXi regularize(const XiModel& model, int sweep_n, double inflate, std::uint64_t seed) {
  const auto prop = is_proper_sampled(model, 200, kDefaultTol, seed);
  if (!prop.proper)
    throw std::invalid_argument("regularize: properness witness violation (" +
                                prop.witness->failure + ")");
  const int D = model.dim();
  const std::size_t coords = static_cast<std::size_t>(D * (D + 1) / 2 + 1);
  double maxg = 0.0;
  for (int i = 0; i < sweep_n; ++i) {
    const auto x = kronecker_point(static_cast<std::size_t>(i), coords);
    Eigen::MatrixXd S(D, D);
    std::size_t c = 0;
    for (int r = 0; r < D; ++r) {
      for (int q = r; q < D; ++q) {
        S(r, q) = S(q, r) = 2.0 * x[c++] - 1.0;
      }
    }
    SymMatrix a = psd_clamp(SymMatrix::from_dense(S));
    const double tr = a.trace();
    if (tr < 1e-12) continue;
    a = a * (2.0 * D * x[coords - 1] / tr);
    const SymMatrix g = SymMatrix::from_dense(model.grad(a.mat()));
    const auto [vals, vecs] = eigen_sym(g);
    maxg = std::max(maxg, std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1))));
  }
  RegularizedXi r;
  r.base = model;
  r.L = inflate * maxg;
  r.xi0 = model.eval(Eigen::MatrixXd::Zero(D, D));
  return r;
}

Eigen::MatrixXd gram_matrix(const XiModel& model, const std::vector<Eigen::MatrixXd>& sigmas,
                            double N) {
  const int n = static_cast<int>(sigmas.size());
  const int D = model.dim();
  for (const auto& s : sigmas) {
    if (s.rows() != D) throw std::invalid_argument("gram_matrix: configuration row count != D");
    if (s.squaredNorm() > N * (1.0 + 1e-9))
      throw std::invalid_argument("gram_matrix: norm constraint violated");
  }
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Eigen::MatrixXd A = sigmas[i] * sigmas[j].transpose() / N;
      G(i, j) = N * model.eval(A);
      G(j, i) = G(i, j);
    }
  }
  return G;
}

}  // namespace hjcone
