#pragma once

#include <cstdint>
#include <vector>

#include "hjcone/sym.hpp"

namespace hjcone {

// A point of (S^D)^K. Membership in the chain cone (0 <= x_1 <= ... <= x_K)
// or its dual is tested, never enforced.
struct ConePoint {
  std::vector<SymMatrix> parts;

  ConePoint() = default;
  explicit ConePoint(std::vector<SymMatrix> p) : parts(std::move(p)) {}
  static ConePoint zero(int K, int dim);
  // D = 1 convenience
  static ConePoint from_scalars(const std::vector<double>& v);

  int K() const { return static_cast<int>(parts.size()); }
  int dim() const { return parts.empty() ? 0 : parts[0].dim(); }

  ConePoint operator+(const ConePoint& o) const;
  ConePoint operator-(const ConePoint& o) const;
  ConePoint operator*(double s) const;
  double norm() const;
};

double frob_dot(const ConePoint& a, const ConePoint& b);

// x_1 >= 0 and x_{k+1} - x_k >= 0 in the PSD order, within tol.
bool in_closure(const ConePoint& x, double tol = kDefaultTol);

// Tail sums sum_{l>=k} x_l >= 0 for every k (the dual cone).
bool in_dual(const ConePoint& x, double tol = kDefaultTol);

// Euclidean projection onto the chain cone. D = 1 uses exact isotonic
// regression (pool-adjacent-violators); otherwise Dykstra's alternating
// scheme over the K PSD constraints, iterated to the given residual.
ConePoint project_closure(const ConePoint& p, double residual_tol = 1e-9, int max_iter = 20000);

// Projection onto the intersection of the chain cone with (shift + dual
// cone), via Dykstra over 2K eigenvalue-clamp projections. The set is
// nonempty for every shift.
ConePoint project_chain_and_shifted_dual(const ConePoint& p, const ConePoint& shift,
                                         double residual_tol = 1e-9, int max_iter = 20000);

// Generators {-v v*} of the normal cone to the PSD cone at x (K = 1 only):
// one generator per eigenvector of x with eigenvalue <= tol; empty at
// interior points.
std::vector<SymMatrix> normal_cone_psd(const SymMatrix& x, double tol = kDefaultTol);

// Scaled norm sqrt((1/K) sum_k (K |p_k|)^2) = sqrt(K) |p|.
double norm_2star(const ConePoint& p);

// Random element of the dual cone: PSD blocks lifted to chain tails.
ConePoint random_dual_element(std::mt19937_64& rng, int K, int dim, double scale = 1.0);

}  // namespace hjcone
