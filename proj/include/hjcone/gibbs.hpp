#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hjcone/cascade.hpp"
#include "hjcone/measure.hpp"
#include "hjcone/rng.hpp"
#include "hjcone/xi.hpp"

namespace hjcone {

// Product reference measure on (R^N)^D: every coordinate i carries the same
// finite measure on R^D, with |point|^2 <= 1 so configurations satisfy
// |sigma|^2 <= N.
struct ReferenceMeasure {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;

  static ReferenceMeasure uniform_hypercube(int D, double scale);
  static ReferenceMeasure product_finite(std::vector<Eigen::VectorXd> points,
                                         std::vector<double> weights);
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

// Enriched model at size N: Gaussian field with covariance N xi(sigma tau*/N),
// ultrametric external field indexed by the measure's atoms, inverse
// temperature parameter t, and master seed for all replica randomness.
struct GibbsModel {
  int N = 1;
  int D = 1;
  ReferenceMeasure ref;
  XiModel xi;
  double t = 0.0;
  DiscreteMonotoneMeasure mu;
  std::uint64_t seed = 1;

  // cascade depth = number of atoms - 1
  int depth() const { return mu.levels() - 1; }
  double support_count() const;
};

enum class FieldSampler { DirectTensor, GramEigen };

struct EstimateOptions {
  int replicas = 100;
  int fanout = 32;
  FieldSampler sampler = FieldSampler::DirectTensor;
  bool parallel = true;
};

// Enumerated configuration support with per-configuration reference weights
// and self-overlap data.
struct ConfigTable {
  int N = 1, D = 1;
  std::vector<Eigen::MatrixXd> sigma;        // D x N
  std::vector<double> logp;
  std::vector<double> xi_self;               // xi(sigma sigma*/N)
  std::vector<Eigen::MatrixXd> self_overlap; // sigma sigma^T
};

ConfigTable make_config_table(const GibbsModel& model);

// One disorder realization: field over the support (unit t-scaling), cascade
// tree, and raw Gaussian vectors per tree node.
struct GibbsRealization {
  const GibbsModel* model = nullptr;
  const ConfigTable* table = nullptr;
  CascadeTree tree;
  std::vector<Eigen::MatrixXd> raw_z;  // flat node index -> D x N
  std::vector<double> field;           // H_N(sigma) per configuration

  std::size_t flat_node(int level, std::size_t node) const;
  std::size_t total_nodes() const;
};

GibbsRealization make_realization(const GibbsModel& model, const ConfigTable& table, int fanout,
                                  std::uint64_t replica_tag, FieldSampler sampler);

// Per-measure energy tables: e[level][node][config] = w_node . sigma with
// w_node = sqrt(2 q_k - 2 q_{k-1}) z_node, and the q_last self term.
struct EnergyTables {
  std::vector<std::vector<double>> e;  // per level, node-major
  std::vector<double> qlast_self;      // sigma . q_last sigma
};

EnergyTables build_energy_tables(const GibbsRealization& real, const DiscreteMonotoneMeasure& mu);

// Exact free energy -(1/N) log sum over support x leaves, stabilized
// log-sum-exp; budget |support| * |leaves| <= 1e7.
double free_energy_value(const GibbsRealization& real, const EnergyTables& tables, double t);
double free_energy(const GibbsRealization& real);

// Monte Carlo over disorder replicas keyed by (master seed, replica index);
// deterministic for fixed options regardless of scheduling.
struct EstimateResult {
  MeanStderr stats;
  std::vector<double> per_replica;
};

EstimateResult estimate_free_energy(const GibbsModel& model, const EstimateOptions& opts);

// Normalized Gibbs state weights over (configuration, leaf) pairs plus the
// node-mass aggregates used by the overlap formulas.
struct GibbsState {
  const GibbsRealization* real = nullptr;
  std::vector<double> w;                          // size nconfig * nleaves, leaf-major
  std::vector<double> config_marginal;            // sum over leaves
  std::vector<std::vector<double>> node_mass;     // per level: node mass
  std::vector<std::vector<Eigen::MatrixXd>> node_msum;  // per level: sum of w sigma (D x N)
};

GibbsState build_gibbs_state(const GibbsRealization& real, const EnergyTables& tables, double t);

// <1{wedge = k}> for k = 0..depth.
std::vector<double> pair_level_probs(const GibbsState& st);
// <1{wedge = k} sigma sigma'*> / N  (the q_k-derivative formula).
SymMatrix pair_level_overlap(const GibbsState& st, int k);
// <xi(sigma sigma'* / N)>.
double pair_xi_expectation(const GibbsState& st);
// Exact expectation of a two-replica observable g(R_plus, R_0) under the
// product Gibbs measure, by enumeration over state pairs.
double gibbs_pair_expectation(const GibbsState& st,
                              const std::function<double(const Eigen::MatrixXd&, double)>& g);

// ---------------------------------------------------------------------------
// derivative identities

struct DerivativeReport {
  double fd_step = 0.0;
  // t-derivative: paired finite-difference minus formula gap statistics
  MeanStderr t_gap;
  MeanStderr t_formula;
  MeanStderr t_fd;
  // q-derivatives, one entry per (atom k, basis direction a)
  struct QEntry {
    int k = 0;
    SymMatrix direction;
    MeanStderr gap;
    MeanStderr formula;
    MeanStderr fd;
  };
  std::vector<QEntry> q_entries;
  // averaged derivative matrices per atom, for PSD/monotone checks
  std::vector<SymMatrix> dq_mean;
  std::vector<double> dq_entry_stderr;  // max entry stderr per atom
};

DerivativeReport derivative_identities(const GibbsModel& model, double fd_step, int replicas,
                                       int fanout, std::uint64_t seed);

// ---------------------------------------------------------------------------
// overlap diagnostics (reported, not asserted)

struct GGTupleSpec {
  int n = 2;           // replicas in the conditioning function
  int f_a = 0;         // basis index for f's matrix (0 = none)
  int f_schur = 1;     // Schur power inside f
  double f_lambda = 0; // weight of R_0 inside f
  int f_pow = 1;       // outer power of f
  int g_a = 0;
  int g_schur = 1;
  double g_lambda = 0;
  int g_pow = 1;
};

struct DiagnosticsReport {
  struct Entry {
    GGTupleSpec spec;
    double value = 0.0;
    double stderr_ = 0.0;
  };
  std::vector<Entry> gg_defects;
  double skew_mass = 0.0, skew_stderr = 0.0;
  double sync_defect = 0.0, sync_stderr = 0.0;
  double mean_sq_overlap = 0.0;
};

DiagnosticsReport overlap_diagnostics(const GibbsModel& model, int replicas, int fanout,
                                      std::uint64_t seed,
                                      const std::vector<GGTupleSpec>& catalog = {});

// ---------------------------------------------------------------------------
// measured cascade transform and the full-pipeline bound report

// Battery of (tree, z) replicas at t = 0 with common random numbers across
// evaluation points; psi(x) is the measured cascade transform of the
// reference measure at the uniform measure on the K parts of x.
class CascadeTransform {
 public:
  static CascadeTransform make(const GibbsModel& base, int K, int fanout, int replicas,
                               std::uint64_t seed);

  double value(const ConePoint& x) const;
  MeanStderr stats(const ConePoint& x) const;
  int K() const { return K_; }

 private:
  int K_ = 1, N_ = 1, D_ = 1, fanout_ = 1;
  ReferenceMeasure ref_;
  std::vector<CascadeTree> trees_;
  std::vector<std::vector<Eigen::MatrixXd>> zs_;
  double replica_value(std::size_t rep, const std::vector<SymMatrix>& coef,
                       const SymMatrix& qlast) const;
};

struct BoundRow {
  double t = 0.0;
  int mu_id = 0;
  double free_energy = 0.0;
  double stderr_ = 0.0;
  double solver_value = 0.0;
  double grid_error = 0.0;
  double allowance = 0.0;
  double margin = 0.0;
  bool flagged = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  int flags = 0;
};

// Runs the full pipeline: measured psi -> finite-K solve -> margin table.
// Allowance = 3 stderr + grid error + (t + sqrt(m2))/(2 sqrt(K)).
BoundReport bound_check(const GibbsModel& base, const std::vector<DiscreteMonotoneMeasure>& mus,
                        const std::vector<double>& t_grid, int K, double h, double x_max,
                        const EstimateOptions& opts);

// Gaussian field over an explicit configuration list via the Gram
// eigendecomposition (negative eigenvalues clamped at -1e-8; indefinite
// beyond that tolerance throws). List size capped at 2^14.
std::vector<double> sample_field_gram(const XiModel& xi, const std::vector<Eigen::MatrixXd>& sigmas,
                                      double N, std::mt19937_64& rng);
// Same law via the coefficient-tensor representation of the catalog models.
std::vector<double> sample_field_direct(const XiModel& xi,
                                        const std::vector<Eigen::MatrixXd>& sigmas, double N,
                                        std::mt19937_64& rng);

}  // namespace hjcone
