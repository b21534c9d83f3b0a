#include "hjcone/sym.hpp"

#include <cmath>
#include <stdexcept>

namespace hjcone {

namespace {

double effective_tol(const SymMatrix& a, double tol) {
  return std::max(tol, 1e-12 * a.norm());
}

void check_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

SymMatrix::SymMatrix(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("SymMatrix: dim out of range");
  m_ = Eigen::MatrixXd::Zero(dim, dim);
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix: not square");
  if (a.rows() < 1 || a.rows() > kMaxDim) throw std::invalid_argument("SymMatrix: dim out of range");
  SymMatrix s;
  s.m_ = 0.5 * (a + a.transpose());
  return s;
}

SymMatrix SymMatrix::identity(int dim) {
  return from_dense(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::diag(const std::vector<double>& d) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<long>(d.size()));
  return from_dense(Eigen::MatrixXd(v.asDiagonal()));
}

SymMatrix SymMatrix::scalar(double v) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = v;
  return from_dense(m);
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  check_same_dim(*this, o, "SymMatrix::+");
  return from_dense(m_ + o.m_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  check_same_dim(*this, o, "SymMatrix::-");
  return from_dense(m_ - o.m_);
}

SymMatrix SymMatrix::operator*(double s) const { return from_dense(m_ * s); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  check_same_dim(*this, o, "SymMatrix::+=");
  m_ += o.m_;
  return *this;
}

double frob_dot(const SymMatrix& a, const SymMatrix& b) {
  check_same_dim(a, b, "frob_dot");
  return a.mat().cwiseProduct(b.mat()).sum();
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_sym(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (a.dim() <= 3) {
    es.computeDirect(a.mat());
  } else {
    es.compute(a.mat());
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_psd(const SymMatrix& a, double tol) {
  const auto [vals, vecs] = eigen_sym(a);
  return vals(0) >= -effective_tol(a, tol);
}

bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  check_same_dim(a, b, "psd_leq");
  return is_psd(b - a, tol);
}

SymMatrix sqrt_psd(const SymMatrix& a, double tol) {
  const auto [vals, vecs] = eigen_sym(a);
  if (vals(0) < -effective_tol(a, tol)) throw std::invalid_argument("sqrt_psd: input not PSD");
  Eigen::VectorXd s = vals.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix::from_dense(vecs * s.asDiagonal() * vecs.transpose());
}

SymMatrix psd_clamp(const SymMatrix& a) {
  const auto [vals, vecs] = eigen_sym(a);
  if (vals(0) >= 0.0) return a;
  Eigen::VectorXd c = vals.cwiseMax(0.0);
  return SymMatrix::from_dense(vecs * c.asDiagonal() * vecs.transpose());
}

SymMatrix dsqrt(const SymMatrix& q, const SymMatrix& a, double tol) {
  check_same_dim(q, a, "dsqrt");
  const auto [vals, vecs] = eigen_sym(q);
  if (vals(0) <= tol) throw std::invalid_argument("dsqrt: q not positive definite");
  // In the eigenbasis of q, sqrt(2q) is diagonal with entries sqrt(2 l_i).
  Eigen::MatrixXd at = vecs.transpose() * a.mat() * vecs;
  Eigen::MatrixXd x(q.dim(), q.dim());
  for (int i = 0; i < q.dim(); ++i) {
    for (int j = 0; j < q.dim(); ++j) {
      x(i, j) = 2.0 * at(i, j) / (std::sqrt(2.0 * vals(i)) + std::sqrt(2.0 * vals(j)));
    }
  }
  return SymMatrix::from_dense(vecs * x * vecs.transpose());
}

SymMatrix random_sym(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = scale * g(rng);
  return SymMatrix::from_dense(m);
}

SymMatrix random_psd(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = g(rng);
  return SymMatrix::from_dense(scale * (m * m.transpose()) / static_cast<double>(dim));
}

}  // namespace hjcone
