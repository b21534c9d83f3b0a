#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "hjcone/measure.hpp"
#include "hjcone/sym.hpp"

namespace hjcone {

// Finitary tree of depth K with n children per node: level-k nodes are
// indexed 0..n^k-1, the parent of node j is j/n. Decorations per non-root
// node are the ordered atoms of a Poisson process; leaf weights are the
// normalized products of decorations along the path.
struct CascadeTree {
  int depth = 0;
  int fanout = 0;
  std::vector<double> cuts;               // 0 = z_0 < z_1 < ... < z_{K+1} = 1
  std::vector<std::vector<double>> dec;   // dec[k][node] for k = 1..depth
  std::vector<double> leaf_weights;       // normalized, size fanout^depth

  std::size_t num_leaves() const { return leaf_weights.size(); }
  std::size_t nodes_at(int level) const;
  // index of the level-k ancestor of a leaf
  std::size_t ancestor(std::size_t leaf, int level) const;
  // depth of the common ancestor of two leaves
  int overlap(std::size_t a, std::size_t b) const;
};

// Samples the tree: children of a level-k node carry the n largest atoms of
// the Poisson process with intensity z_{k+1} x^{-1-z_{k+1}} dx, generated as
// Gamma_j^{-1/z_{k+1}} with Gamma_j partial sums of unit exponentials.
CascadeTree sample_cascade(const std::vector<double>& cuts, int K, int fanout,
                           std::mt19937_64& rng);

// Exact within-tree overlap probabilities <1{wedge = k}> for k = 0..K.
std::vector<double> cascade_level_overlap_probs(const CascadeTree& tree);

// Streaming version of the level statistics sum_{nodes at level k} V^2 for
// K = 2 trees, avoiding tree storage; used by large-fanout sweeps.
// Returns {P(wedge>=1), P(wedge>=2)}.
std::pair<double, double> cascade_sq_masses_k2(const std::vector<double>& cuts, int fanout,
                                               std::mt19937_64& rng);

// Isometric embedding of the leaves: vectors alpha_hat with
// alpha_hat beta_hat^* = q_{alpha wedge beta}. The measure supplies the atoms
// q_0 <= ... <= q_K (uniform-weight convention); tree depth must equal K.
class CascadeEmbedding {
 public:
  CascadeEmbedding(const CascadeTree& tree, const DiscreteMonotoneMeasure& mu);

  // dense leaf vector, D rows by D*|nodes| columns
  Eigen::MatrixXd vector(std::size_t leaf) const;
  // alpha_hat beta_hat^* computed from the dense vectors
  SymMatrix overlap(std::size_t leaf_a, std::size_t leaf_b) const;

  int dim() const { return dim_; }

 private:
  const CascadeTree* tree_;
  int dim_;
  std::vector<SymMatrix> level_coef_;       // (q_k - q_{k-1})^{1/2}
  std::vector<std::size_t> node_offset_;    // flattened node id base per level
  std::size_t total_nodes_;
};

}  // namespace hjcone
