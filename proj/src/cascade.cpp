#include "hjcone/cascade.hpp"

#include <cmath>
#include <stdexcept>

namespace hjcone {

namespace {

void check_cuts(const std::vector<double>& cuts, int K) {
  if (static_cast<int>(cuts.size()) != K + 2)
    throw std::invalid_argument("cascade: cuts must have K+2 entries");
  if (cuts.front() != 0.0 || cuts.back() != 1.0)
    throw std::invalid_argument("cascade: cuts must start at 0 and end at 1");
  for (int k = 0; k + 1 < K + 2; ++k) {
    if (!(cuts[k] < cuts[k + 1])) throw std::invalid_argument("cascade: invalid zeta ordering");
  }
}

// ordered atoms of PPP(z x^{-1-z}): u_j = Gamma_j^{-1/z}
void top_atoms(double z, int n, std::mt19937_64& rng, double* out) {
  std::exponential_distribution<double> e(1.0);
  double gamma = 0.0;
  const double inv = -1.0 / z;
  for (int j = 0; j < n; ++j) {
    gamma += e(rng);
    out[j] = std::exp(inv * std::log(gamma));
  }
}

}  // namespace

std::size_t CascadeTree::nodes_at(int level) const {
  std::size_t n = 1;
  for (int k = 0; k < level; ++k) n *= static_cast<std::size_t>(fanout);
  return n;
}

std::size_t CascadeTree::ancestor(std::size_t leaf, int level) const {
  std::size_t id = leaf;
  for (int k = depth; k > level; --k) id /= static_cast<std::size_t>(fanout);
  return id;
}

int CascadeTree::overlap(std::size_t a, std::size_t b) const {
  int k = depth;
  while (k > 0 && a != b) {
    a /= static_cast<std::size_t>(fanout);
    b /= static_cast<std::size_t>(fanout);
    --k;
  }
  return k;
}

CascadeTree sample_cascade(const std::vector<double>& cuts, int K, int fanout,
                           std::mt19937_64& rng) {
  check_cuts(cuts, K);
  CascadeTree t;
  t.depth = K;
  t.fanout = K == 0 ? 1 : fanout;
  t.cuts = cuts;
  if (K == 0) {
    t.leaf_weights = {1.0};
    return t;
  }
  if (fanout < 2) throw std::invalid_argument("cascade: fanout must be >= 2");

  t.dec.resize(K + 1);
  for (int k = 1; k <= K; ++k) {
    const std::size_t parents = t.nodes_at(k - 1);
    t.dec[k].resize(parents * static_cast<std::size_t>(fanout));
    for (std::size_t p = 0; p < parents; ++p) {
      top_atoms(cuts[k], fanout, rng, t.dec[k].data() + p * static_cast<std::size_t>(fanout));
    }
  }
  // leaf weight = product of decorations along the path, then normalization
  std::vector<double> w = t.dec[1];
  for (int k = 2; k <= K; ++k) {
    std::vector<double> next(t.nodes_at(k));
    for (std::size_t j = 0; j < next.size(); ++j)
      next[j] = w[j / static_cast<std::size_t>(fanout)] * t.dec[k][j];
    w.swap(next);
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  t.leaf_weights = std::move(w);
  return t;
}

std::vector<double> cascade_level_overlap_probs(const CascadeTree& tree) {
  const int K = tree.depth;
  // sq[k] = sum over level-k nodes of (subtree leaf mass)^2 = <1{wedge >= k}>
  std::vector<double> sq(K + 1, 0.0);
  sq[0] = 1.0;
  std::vector<double> mass = tree.leaf_weights;
  for (int k = K; k >= 1; --k) {
    double s = 0.0;
    for (double m : mass) s += m * m;
    sq[k] = s;
    if (k > 1) {
      std::vector<double> up(tree.nodes_at(k - 1), 0.0);
      for (std::size_t j = 0; j < mass.size(); ++j)
        up[j / static_cast<std::size_t>(tree.fanout)] += mass[j];
      mass.swap(up);
    }
  }
  std::vector<double> probs(K + 1);
  for (int k = 0; k <= K; ++k) probs[k] = sq[k] - (k < K ? sq[k + 1] : 0.0);
  return probs;
}

std::pair<double, double> cascade_sq_masses_k2(const std::vector<double>& cuts, int fanout,
                                               std::mt19937_64& rng) {
  check_cuts(cuts, 2);
  std::vector<double> u1(fanout), child(fanout);
  top_atoms(cuts[1], fanout, rng, u1.data());
  double Z = 0.0, sq1 = 0.0, sq2 = 0.0;
  std::vector<double> sub_mass(fanout), sub_sq(fanout);
  for (int b = 0; b < fanout; ++b) {
    top_atoms(cuts[2], fanout, rng, child.data());
    double w = 0.0, w2 = 0.0;
    for (int c = 0; c < fanout; ++c) {
      w += child[c];
      w2 += child[c] * child[c];
    }
    sub_mass[b] = u1[b] * w;
    sub_sq[b] = u1[b] * u1[b] * w2;
    Z += sub_mass[b];
  }
  for (int b = 0; b < fanout; ++b) {
    const double v = sub_mass[b] / Z;
    sq1 += v * v;
    sq2 += sub_sq[b] / (Z * Z);
  }
  return {sq1, sq2};
}

CascadeEmbedding::CascadeEmbedding(const CascadeTree& tree, const DiscreteMonotoneMeasure& mu)
    : tree_(&tree), dim_(mu.dim) {
  if (mu.levels() != tree.depth + 1)
    throw std::invalid_argument("embed_cascade: tree depth must equal the measure's K");
  SymMatrix prev = SymMatrix::zero(dim_);
  for (int k = 0; k <= tree.depth; ++k) {
    level_coef_.push_back(sqrt_psd(mu.atoms[k] - prev));
    prev = mu.atoms[k];
  }
  node_offset_.resize(tree.depth + 1);
  std::size_t acc = 0;
  for (int k = 0; k <= tree.depth; ++k) {
    node_offset_[k] = acc;
    acc += tree.nodes_at(k);
  }
  total_nodes_ = acc;
}

Eigen::MatrixXd CascadeEmbedding::vector(std::size_t leaf) const {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim_, static_cast<long>(total_nodes_) * dim_);
  for (int k = 0; k <= tree_->depth; ++k) {
    const std::size_t node = node_offset_[k] + tree_->ancestor(leaf, k);
    v.block(0, static_cast<long>(node) * dim_, dim_, dim_) = level_coef_[k].mat();
  }
  return v;
}

SymMatrix CascadeEmbedding::overlap(std::size_t leaf_a, std::size_t leaf_b) const {
  const Eigen::MatrixXd va = vector(leaf_a);
  const Eigen::MatrixXd vb = vector(leaf_b);
  return SymMatrix::from_dense(va * vb.transpose());
}

}  // namespace hjcone
