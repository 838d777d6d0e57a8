#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netbart/dataset.hpp"

namespace netbart {

// Canonical node labels: root is 1, children of nx are 2*nx and 2*nx+1,
// so parent(nx) = nx/2 and depth(nx) = floor(log2 nx). Ids are capped at
// depth 60 to stay clear of overflow.
using NodeId = std::uint64_t;

constexpr int kMaxTreeDepth = 60;

inline NodeId parent_id(NodeId id) { return id / 2; }
inline NodeId left_child_id(NodeId id) { return 2 * id; }
inline NodeId right_child_id(NodeId id) { return 2 * id + 1; }
int node_depth(NodeId id);

enum class RuleKind { Continuous, Categorical };

// A decision rule {X_var in C}. Continuous rules send x left iff
// x_var < cut (C = [0, cut)). Categorical rules store both branches'
// level sets explicitly; together they partition the set of levels
// available at the node the rule is attached to.
struct DecisionRule {
  int var = 0;  // global predictor index: continuous block first, then categorical
  RuleKind kind = RuleKind::Continuous;
  double cut = 0.0;
  std::vector<int> left_levels;   // sorted level indices
  std::vector<int> right_levels;  // sorted level indices

  bool sends_left_continuous(double x) const { return x < cut; }
  bool sends_left_level(int level) const;  // throws if the level is in neither set
};

struct TreeNode {
  std::optional<DecisionRule> rule;  // present iff internal
  double jump = 0.0;                 // meaningful iff leaf

  bool is_leaf() const { return !rule.has_value(); }
};

// A rooted binary regression tree, nodes keyed by canonical label.
// Default-constructed: a single root leaf with jump 0.
struct RegressionTree {
  std::map<NodeId, TreeNode> nodes;

  RegressionTree() { nodes[1] = TreeNode{}; }

  const TreeNode& at(NodeId id) const;
  TreeNode& at(NodeId id);
  bool is_leaf(NodeId id) const { return at(id).is_leaf(); }
  int n_leaves() const;

  void check_structure() const;
};

// Leaf label -> sorted indices of the observations reaching that leaf.
using SuffStatMap = std::map<NodeId, std::vector<int>>;

// Half-open interval of continuous values that can reach a node.
struct AvailableInterval {
  double lo = 0.0;
  double hi = 1.0;

  bool nonempty() const { return hi > lo; }
};

NodeId traverse(const RegressionTree& t, const Dataset& ds, int row);
double evaluate(const RegressionTree& t, const Dataset& ds, int row);

// Point variant for probes and fresh predictor vectors.
NodeId traverse_point(const RegressionTree& t, const std::vector<double>& x_cont,
                      const std::vector<int>& x_cat, int p_cont);

// Available set of a predictor at a node, accumulated by intersecting the
// branch sets of every ancestor splitting on the same variable.
AvailableInterval available_interval(const RegressionTree& t, NodeId id, int var);
std::vector<int> available_levels(const RegressionTree& t, NodeId id, int var,
                                  int n_levels);

// Grow: the leaf becomes internal with `rule`; its observation list is
// split between the two new children by routing through the new rule only.
void birth(RegressionTree& t, SuffStatMap& ssm, NodeId leaf_id, const DecisionRule& rule,
           const Dataset& ds);

// Prune: removes the two leaf children of a no-grandchild node and merges
// their observation lists.
void death(RegressionTree& t, SuffStatMap& ssm, NodeId nog_id);

std::vector<NodeId> leaf_ids(const RegressionTree& t);
std::vector<NodeId> nog_ids(const RegressionTree& t);

SuffStatMap suff_stat_from_scratch(const RegressionTree& t, const Dataset& ds);

std::string tree_to_json(const RegressionTree& t);
RegressionTree tree_from_json(const std::string& text);

}  // namespace netbart
