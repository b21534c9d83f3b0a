#pragma once

#include <cstdint>

#include "hjcone/cone.hpp"
#include "hjcone/xi.hpp"

namespace hjcone {

// Discretized nonlinearity on K-tuples of symmetric matrices:
//   on the chain cone   H(p) = (1/K) sum_k xibar(K p_k),
//   everywhere else     H(p) = inf { H(q) : q in cone, q - p in dual cone }.
// The extension is monotone under dual-cone shifts and uniformly Lipschitz
// in the scaled norm sqrt(K)|.|.
struct ChainHamiltonian {
  int K = 1;
  RegularizedXi xibar;

  ChainHamiltonian(int k, RegularizedXi xb) : K(k), xibar(std::move(xb)) {}

  // Requires p in the chain cone within tol.
  double value_on_cone(const ConePoint& p, double tol = kDefaultTol) const;

  // Variational extension; multi-start projected descent warm-started at the
  // cone projection of p (always feasible). Deterministic given the seed.
  double value_extended(const ConePoint& p, std::uint64_t seed = 0) const;

  // D = 1 fast path over raw slopes, allocation-free; same contract.
  double value_extended_scalar(const double* p, int n, std::uint64_t seed = 0) const;

  // Per-entry derivative bound of the Hamiltonian over gradient arguments
  // with |p_k| <= radius; used for scheme viscosity/CFL.
  double slope_bound(double radius) const;
};

// Block refinement: p in (S^D)^K maps to (S^D)^{KR} with each p_k / R
// repeated R times; the extension is invariant under it.
ConePoint refine(const ConePoint& p, int R);

}  // namespace hjcone
