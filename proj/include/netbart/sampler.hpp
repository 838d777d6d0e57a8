#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netbart/prior.hpp"
#include "netbart/tree.hpp"

namespace netbart {

// Per-leaf sufficient statistics and the Gaussian-conjugacy quantities
// built from them: P = |I|/sigma^2 + 1/tau_leaf^2 and
// Theta = sum(r_i)/sigma^2 + mu0/tau_leaf^2. P stays positive for empty
// leaves, so proposals that empty a leaf remain well defined.
struct LeafStats {
  std::int64_t count = 0;
  double residual_sum = 0.0;
  double P = 0.0;
  double Theta = 0.0;
};

LeafStats make_leaf_stats(std::int64_t count, double residual_sum, double sigma,
                          double tau_leaf, double mu0);

// Log of one leaf's factor in the marginal tree likelihood, with the
// factors common to every candidate tree dropped: only differences of
// these values ever enter an acceptance ratio. The -mu0^2/(2 tau^2) term
// is kept because leaf counts differ across candidate trees.
double leaf_log_marginal(const LeafStats& stats, double tau_leaf, double mu0);

struct ChainConfig {
  int n_iterations = 2000;
  int n_burnin = 1000;
  int thin = 1;
  int min_leaf_size = 0;   // 0 keeps full support; >0 force-rejects small leaves
  double q_grow = 0.5;     // grow is forced at a root-only tree
  std::uint64_t seed = 0;
  bool probit = false;
  bool save_trees = false;
  bool check_invariants = false;  // bookkeeping audits each iteration

  void validate() const;
};

struct SamplerContext {
  const Dataset& data;
  const PredictorSpace& space;
  const PriorConfig& prior;
  const ChainConfig& chain;
};

// Mutable state of one Gibbs chain. `allfit` carries the running estimate
// of f at the training rows and `residual` the working outcome minus
// allfit; both are maintained incrementally. Owned by a single chain,
// never shared.
struct EnsembleState {
  std::vector<RegressionTree> trees;
  std::vector<SuffStatMap> ssms;
  std::vector<double> outcome;  // standardized y, or the probit latents
  std::vector<double> allfit;
  std::vector<double> residual;
  double sigma = 1.0;
  Rng rng;
  std::int64_t iteration = 0;

  int n_trees() const { return static_cast<int>(trees.size()); }
  int n_obs() const { return static_cast<int>(outcome.size()); }
};

EnsembleState init_state(const Dataset& ds, std::vector<double> outcome,
                         const PriorConfig& prior, std::uint64_t seed, double sigma_init);

// Moves tree m's fit out of allfit and into residual, leaving residual
// holding the partial residuals for this tree's update; restore puts the
// (re-drawn) fit back. Loops run leaf-by-leaf over the suff-stat map.
void remove_tree_fit(EnsembleState& state, int m);
void restore_tree_fit(EnsembleState& state, int m);

// Log MH acceptance ratios for grow/prune proposals with prior-drawn
// rules. Precondition: tree m's fit has been removed, so `residual` holds
// this tree's partial residuals. Only the three affected leaves' stats
// enter. A grow proposal whose child would fall below min_leaf_size
// returns -inf.
double grow_log_accept(const EnsembleState& state, int m, NodeId leaf_id,
                       const DecisionRule& rule, const SamplerContext& ctx);
double prune_log_accept(const EnsembleState& state, int m, NodeId nog_id,
                        const SamplerContext& ctx);

// One tree's Gibbs update: remove fit, propose grow/prune (grow forced at
// a root-only tree), accept by the closed-form ratio, redraw every leaf
// jump from N(Theta/P, 1/P), restore fit.
void update_tree(EnsembleState& state, int m, const SamplerContext& ctx);

// Conjugate scaled-inverse-chi-square update of sigma from the full
// residual sum of squares.
void update_sigma(EnsembleState& state, const SamplerContext& ctx);

// Albert-Chib latent draw: z_i ~ N(allfit_i, 1) truncated to (0, inf) if
// y_i = 1 and to (-inf, 0] otherwise. Installs z as the working outcome
// and refreshes residual. Returns the latent vector.
std::vector<double> probit_augment(EnsembleState& state, const std::vector<int>& y01);

struct PosteriorSamples {
  std::vector<double> sigma;                    // original outcome scale
  std::vector<std::vector<int>> leaf_counts;    // per draw, per tree
  std::vector<std::vector<double>> train_fit;   // original scale; probit: Phi(f)
  std::vector<std::vector<double>> test_fit;    // present iff test data was given
  std::vector<std::string> tree_lines;          // ndjson, present iff save_trees
  OutcomeScaling scaling;
  bool probit = false;

  // Populated when check_invariants was set.
  double max_allfit_dev = 0.0;
  double max_residual_dev = 0.0;
  std::int64_t ssm_mismatches = 0;

  int n_draws() const { return static_cast<int>(sigma.size()); }
};

// Full backfitting run. Trees start at root-only with zero jumps; sigma
// starts at the sample sd of the standardized outcome; the sigma prior's
// lambda is calibrated so that P(sigma < sd(y)) = 0.9 unless the caller
// pinned prior.lambda by setting calibrate_lambda = false.
PosteriorSamples run_chain(const Dataset& data, const ChainConfig& chain, PriorConfig prior,
                           const NetworkMap& networks, const Dataset* test_data = nullptr,
                           bool calibrate_lambda = true);

struct PredictionResult {
  std::vector<std::vector<double>> per_draw;  // [draw][row], original scale
  std::vector<double> mean;                   // posterior mean per row
};

// Prediction from serialized ensembles (one ndjson line per draw).
// Draws are evaluated independently (parallel over draws) and averaged
// in draw order. Probit mode returns Phi(f).
PredictionResult predict(const std::vector<std::string>& tree_lines, const Dataset& x_new,
                         const OutcomeScaling& scaling, bool probit);

}  // namespace netbart
