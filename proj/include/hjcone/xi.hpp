#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjcone/sym.hpp"

namespace hjcone {

// Covariance function on D x D matrices. Variants:
//   SchurPower:  xi(A) = C . A^{schur p},  C PSD of side D
//   TensorPower: xi(A) = C . A^{tensor p}, C PSD of side D^p (D^p <= 4096)
//   Multitype:   xi(A) = C . (A tensor A), C PSD of side D^2,
//                index convention (d1,d2) -> d1*D + d2
//   WeightedSum: nonnegative combination of models
// Arguments need not be symmetric: overlaps sigma sigma'* are general.
class XiModel {
 public:
  enum class Kind { SchurPower, TensorPower, Multitype, WeightedSum };

  static XiModel schur_power(int p, const Eigen::MatrixXd& C, double tol = kDefaultTol);
  // Skips the PSD check on C; the properness sampler is the guard for
  // user-supplied coefficient matrices.
  static XiModel schur_power_unchecked(int p, const Eigen::MatrixXd& C);
  static XiModel tensor_power(int p, int dim, const Eigen::MatrixXd& C, double tol = kDefaultTol);
  static XiModel multitype(const Eigen::MatrixXd& C, double tol = kDefaultTol);
  static XiModel weighted_sum(std::vector<std::pair<double, XiModel>> terms);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int power() const { return p_; }
  const Eigen::MatrixXd& coeff() const { return C_; }
  const std::vector<std::pair<double, XiModel>>& terms() const { return terms_; }

  double eval(const Eigen::MatrixXd& A) const;
  // Euclidean gradient as a D x D matrix.
  Eigen::MatrixXd grad(const Eigen::MatrixXd& A) const;

  // Allocation-free paths for dim == 1.
  double eval_scalar(double a) const;
  double grad_scalar(double a) const;

  // Embed a SchurPower model as the TensorPower model supported on repeated
  // indices (cross-check helper).
  XiModel as_tensor() const;

  // Product of two models: covariances multiply, the tensor coefficient is
  // the tensor product of the factors'.
  static XiModel product(const XiModel& a, const XiModel& b);

 private:
  XiModel() = default;
  Kind kind_ = Kind::SchurPower;
  int dim_ = 1;
  int p_ = 1;
  Eigen::MatrixXd C_;
  std::vector<std::pair<double, XiModel>> terms_;
};

struct PropernessWitness {
  SymMatrix A, B, E;
  std::string failure;  // "gradient-eigenvalue" or "increment"
};

struct PropernessReport {
  bool proper = true;
  std::optional<PropernessWitness> witness;
};

// Randomized properness test: draws n triples (A, B, E) of PSD matrices with
// A <= B and checks that sym(grad(A)) has no eigenvalue below -tol and that
// (grad(B) - grad(A)) . E >= -tol.
PropernessReport is_proper_sampled(const XiModel& model, int n, double tol = kDefaultTol,
                                   std::uint64_t seed = 0);

enum class Convexity { Convex, NonConvex, Unknown };

// Closed-form convexity classification for SchurPower and Multitype models;
// other variants report Unknown.
Convexity is_convex_criterion(const XiModel& model, double tol = kDefaultTol);

// Globally Lipschitz proper extension agreeing with the base model on the
// trace ball {a PSD : tr(a) <= D}:
//   xibar(a) = max(xi(a), xi(0) + 2L(tr a - D))   for tr a <= 2D
//            = xi(0) + 2L(tr a - D)               otherwise,
// evaluated at the PSD projection of the argument. L bounds the largest
// gradient eigenvalue over {tr <= 2D}.
struct RegularizedXi {
  XiModel base;
  double L = 0.0;
  double xi0 = 0.0;

  double eval(const SymMatrix& a) const;
  // Subgradient selection, valid for descent on the PSD cone.
  SymMatrix grad(const SymMatrix& a) const;
  // Frobenius-norm Lipschitz bound on the cone.
  double lipschitz_fro() const;

  // Allocation-free paths for dim == 1 (argument clamped at 0).
  double eval_scalar(double a) const;
  double grad_scalar(double a) const;
};

// Estimates L by a quasi-random sweep of {a PSD : tr a <= 2D} (sweep_n
// points) inflated by the given factor, after verifying properness on a
// small sample (throws with the witness otherwise).
RegularizedXi regularize(const XiModel& model, int sweep_n = 10000, double inflate = 1.1,
                         std::uint64_t seed = 0);

// G[i][j] = N xi(sigma_i sigma_j^T / N) over a configuration list (each a
// D x n matrix with |sigma|^2 <= N).
Eigen::MatrixXd gram_matrix(const XiModel& model, const std::vector<Eigen::MatrixXd>& sigmas,
                            double N);

}  // namespace hjcone
