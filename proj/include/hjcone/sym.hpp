#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

namespace hjcone {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kMaxDim = 8;

// Dense real symmetric matrix, symmetrized on construction. Carrier for
// overlaps, measure atoms and gradients; supported envelope is dim <= 8.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);

  static SymMatrix from_dense(const Eigen::MatrixXd& a);
  static SymMatrix identity(int dim);
  static SymMatrix zero(int dim) { return SymMatrix(dim); }
  static SymMatrix diag(const std::vector<double>& d);
  // 1x1 convenience for the scalar (D = 1) envelope.
  static SymMatrix scalar(double v);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& mat() const { return m_; }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;
  SymMatrix operator-() const { return *this * -1.0; }
  SymMatrix& operator+=(const SymMatrix& o);

  double norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }

 private:
  Eigen::MatrixXd m_;
};

inline SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

// Frobenius pairing tr(a* b).
double frob_dot(const SymMatrix& a, const SymMatrix& b);

// Eigendecomposition of a symmetric matrix (ascending eigenvalues).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_sym(const SymMatrix& a);

// min eigenvalue >= -max(tol, 1e-12*|a|); the norm-relative floor shields
// downstream cone tests from roundoff.
bool is_psd(const SymMatrix& a, double tol = kDefaultTol);

// a <= b in the PSD order.
bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol = kDefaultTol);

// Principal square root; eigenvalues in the roundoff band are clamped to 0.
SymMatrix sqrt_psd(const SymMatrix& a, double tol = kDefaultTol);

// Projection onto the PSD cone (negative eigenvalues clamped to 0).
SymMatrix psd_clamp(const SymMatrix& a);

// Unique symmetric X with sqrt(2q) X + X sqrt(2q) = 2a, for q positive
// definite: X_ij = 2 a_ij / (l_i + l_j) in the eigenbasis of sqrt(2q).
SymMatrix dsqrt(const SymMatrix& q, const SymMatrix& a, double tol = kDefaultTol);

// Test/sampling helpers.
SymMatrix random_sym(std::mt19937_64& rng, int dim, double scale = 1.0);
SymMatrix random_psd(std::mt19937_64& rng, int dim, double scale = 1.0);

}  // namespace hjcone
