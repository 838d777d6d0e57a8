#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netbart/sampler.hpp"

namespace netbart {

enum class DgpId { Dgp1, Dgp2, Dgp3, Dgp4, NetConstant, NetSmooth };

DgpId parse_dgp(const std::string& name);
std::string dgp_name(DgpId id);

// Synthetic data-generating processes. Dgp1..Dgp4 draw ten uniform
// continuous predictors and one ten-level categorical predictor; the net
// DGPs draw two continuous predictors and a vertex of a network, with an
// equal number of rows per vertex.
struct DgpSpec {
  DgpId id = DgpId::Dgp1;
  int n = 1000;           // total rows (net DGPs round to a per-vertex count)
  double noise_sd = 1.0;  // 0 yields noise-free function evaluations
  std::vector<double> level_probs;  // Dgp1..4; empty = balanced 1/10
  std::uint64_t seed = 0;

  void validate() const;
};

// Balanced and imbalanced level distributions used in the experiments.
std::vector<double> balanced_level_probs();
std::vector<double> imbalanced_level_probs();

// The shared basis functions f0..f3 (x has >= 5 entries in [0,1]).
std::array<double, 4> eval_basis(const std::vector<double>& x);

// Regression function of DGP d at (x, level), level in 0..9.
double eval_mu(int d, const std::vector<double>& x, int level);

// Smooth network DGP: w_v * g0(x) + (1 - w_v) * g1(x), x = (x1, x2).
double eval_network_fn(const std::vector<double>& x, double w_v);

// Vertex weights for NetSmooth: a linear ramp over the grid diagonal.
std::vector<double> grid_vertex_weights(int rows, int cols);
// Vertex values for NetConstant: one constant per grid quadrant.
std::vector<double> grid_vertex_values(int rows, int cols);

// The network the net DGPs live on (default 5 x 10 when rows/cols unset).
Network default_dgp_network();

Dataset generate(const DgpSpec& spec, const Network* net = nullptr);

struct MetricsReport {
  std::optional<double> smse;
  std::optional<double> rmse;
  std::optional<double> misclassification;
  std::optional<double> log_loss;
  std::optional<double> brier;
};

// SMSE is test MSE over the MSE of predicting the training mean.
MetricsReport regression_metrics(const std::vector<double>& y_true,
                                 const std::vector<double>& y_pred, double train_mean);
// Threshold rule: predict 1 iff p > 0.5. Probabilities are clamped to
// [1e-12, 1 - 1e-12] inside the log-loss.
MetricsReport classification_metrics(const std::vector<int>& y_true,
                                     const std::vector<double>& p_pred);

// True level partitions behind Dgp1..Dgp4 (blocks of level indices).
std::vector<std::vector<int>> oracle_blocks(DgpId id);

// Sampler settings shared by every method in a comparison.
struct BenchSamplerConfig {
  int n_trees = 200;
  int n_iterations = 2000;
  int n_burnin = 1000;
  int thin = 1;
};

// Fits one ensemble per true block and predicts blockwise; an empty
// training block falls back to a model fit on all training rows.
std::vector<double> run_oracle(DgpId id, const Dataset& train, const Dataset& test,
                               const BenchSamplerConfig& cfg, std::uint64_t seed);

struct ComparisonRow {
  std::string method;
  int fold = 0;
  std::string metric;
  double value = 0.0;
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> methods;
  int folds = 0;
};

// Runs every method on `reps` independently generated train/test pairs
// (test targets are noise-free function values) and reports per-fold
// metrics plus MSE ratios against the one-hot baseline. Replications fan
// out over derived seeds; results are assembled in replication order,
// so the output is identical for any thread count. When out_dir is
// non-empty, writes metrics.csv, summary.json and manifest.json there.
ComparisonResult run_comparison(const DgpSpec& spec, const std::vector<std::string>& methods,
                                int reps, const BenchSamplerConfig& cfg,
                                const std::string& out_dir);

}  // namespace netbart
