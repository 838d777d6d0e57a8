#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netbart/network.hpp"
#include "netbart/tree.hpp"

namespace netbart {

enum class SplitStrategy { Unif, Gs1, Gs2, Gs3, Gs4 };

SplitStrategy parse_strategy(const std::string& name);
std::string strategy_name(SplitStrategy s);

using NetworkMap = std::map<std::string, Network>;

struct PriorConfig {
  int n_trees = 200;        // M
  double alpha = 0.95;      // grow probability alpha * (1 + d)^-beta
  double beta = 2.0;
  double tau_total = 0.25;  // prior sd of f(x)
  double mu0 = 0.0;
  double nu = 3.0;          // sigma prior dof
  double lambda = 1.0;      // sigma prior scale; calibrated from data by the sampler
  // Strategy per network column name; columns not listed use Unif.
  std::map<std::string, SplitStrategy> strategies;

  double tau_leaf() const { return tau_total / std::sqrt(static_cast<double>(n_trees)); }
  double grow_prob(int depth) const { return alpha * std::pow(1.0 + depth, -beta); }
  SplitStrategy strategy_for(const std::string& column) const;
  void validate() const;
};

// What the decision-rule prior needs to know about each predictor.
// Holds pointers into the dataset and network map it was built from.
struct PredictorSpace {
  struct Cont {
    bool degenerate = false;
    const std::vector<double>* grid = nullptr;  // scaled grid, or null/empty
  };
  struct Cat {
    int n_levels = 0;
    const Network* network = nullptr;  // null for unstructured columns
    SplitStrategy strategy = SplitStrategy::Unif;
  };
  std::vector<Cont> cont;
  std::vector<Cat> cat;

  int n_cont() const { return static_cast<int>(cont.size()); }
  int n_cat() const { return static_cast<int>(cat.size()); }
  int p() const { return n_cont() + n_cat(); }
};

PredictorSpace make_space(const Dataset& ds, const NetworkMap& networks, const PriorConfig& cfg);
PredictorSpace make_space(const PredictorSchema& schema, const NetworkMap& networks,
                          const PriorConfig& cfg);

struct NoValidRuleError : std::runtime_error {
  NoValidRuleError() : std::runtime_error("draw_rule: no predictor admits a rule at this node") {}
};

// Branching-process draw of a tree shape: a node at depth d becomes
// internal with probability alpha*(1+d)^-beta. Returns all node ids,
// sorted. A draw that hits the depth cap is rejected and redrawn.
std::vector<NodeId> draw_tree_structure(const PriorConfig& cfg, Rng& rng);

// Decision-rule prior. Picks the variable uniformly among predictors
// whose available set at the node is non-degenerate, then draws the rule:
// continuous cutpoints uniform on the available interval (or its grid
// points), unstructured subsets uniform over non-trivial subsets, network
// subsets via the column's split strategy.
DecisionRule draw_rule(const RegressionTree& t, NodeId node_id, const PredictorSpace& space,
                       Rng& rng);

// Per-leaf jumps i.i.d. N(mu0, tau_leaf^2), drawn in node-id order.
void draw_jumps(RegressionTree& t, const PriorConfig& cfg, Rng& rng);

// Full prior draw: structure, rules (top-down), jumps. A node whose
// available sets admit no rule is truncated to a leaf.
RegressionTree draw_prior_tree(const PredictorSpace& space, const PriorConfig& cfg, Rng& rng);

struct LevelPartition {
  std::vector<std::vector<int>> blocks;  // disjoint, covering, canonical order
};

LevelPartition canonical_partition(std::vector<std::vector<int>> blocks);

// Partition of a categorical column's levels by leaf membership. Probes
// fix continuous coordinates at 0.5 and other categorical columns at
// their first level.
LevelPartition induced_level_partition(const RegressionTree& t, const PredictorSpace& space,
                                       int column);

// One-hot variant: routes the K basis vectors of an indicator block
// occupying continuous predictors [block_start, block_start + K).
LevelPartition induced_level_partition_onehot(const RegressionTree& t, int p_cont,
                                              int block_start, int K);

// 2^K - K, the number of level partitions reachable after one-hot
// encoding. Exact; K > 62 overflows and is an error.
std::uint64_t count_onehot_partitions(int K);

// Bell number by the Bell-triangle recurrence; exact for 1 <= K <= 25.
std::uint64_t bell_number(int K);

// Which level structure a co-clustering analysis probes: the levels of a
// categorical column, or the basis vectors of a one-hot indicator block.
struct ColumnProbe {
  enum Mode { Levels, OneHot };
  Mode mode = Levels;
  int column = 0;       // Levels: categorical column index in the space
  int block_start = 0;  // OneHot: continuous index of the block's first indicator
  int n_levels = 0;     // OneHot: block width K

  static ColumnProbe levels(int column) { return {Levels, column, 0, 0}; }
  static ColumnProbe onehot(int block_start, int K) { return {OneHot, 0, block_start, K}; }
};

// Monte Carlo estimate, over n_draws prior tree draws, of the probability
// that two levels land in the same induced block. Symmetric, unit
// diagonal. Draws fan out over independent substreams of `seed` and are
// reduced with integer counts, so the result does not depend on thread
// count or schedule.
Eigen::MatrixXd co_clustering_matrix(const PriorConfig& cfg, const PredictorSpace& space,
                                     const ColumnProbe& probe, int n_draws, std::uint64_t seed);
// Single-threaded reference implementation, kept for testing.
Eigen::MatrixXd co_clustering_matrix_serial(const PriorConfig& cfg, const PredictorSpace& space,
                                            const ColumnProbe& probe, int n_draws,
                                            std::uint64_t seed);

// Prior draw of a partition of a network's vertices: every block induces
// a connected subgraph when a gs strategy is used.
LevelPartition draw_prior_network_partition(const PriorConfig& cfg, const Network& network,
                                            SplitStrategy strategy, Rng& rng);

}  // namespace netbart
