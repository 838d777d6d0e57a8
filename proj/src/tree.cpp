#include "netbart/tree.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <json.hpp>

namespace netbart {

using nlohmann::json;

int node_depth(NodeId id) {
  if (id == 0) throw std::runtime_error("node_depth: invalid id 0");
  return 63 - std::countl_zero(id);
}

bool DecisionRule::sends_left_level(int level) const {
  if (std::binary_search(left_levels.begin(), left_levels.end(), level)) return true;
  if (std::binary_search(right_levels.begin(), right_levels.end(), level)) return false;
  throw std::runtime_error("decision rule: level " + std::to_string(level) +
                           " is outside both branch sets (corrupt tree)");
}

const TreeNode& RegressionTree::at(NodeId id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw std::runtime_error("tree: no node " + std::to_string(id));
  return it->second;
}

TreeNode& RegressionTree::at(NodeId id) {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw std::runtime_error("tree: no node " + std::to_string(id));
  return it->second;
}

int RegressionTree::n_leaves() const {
  int count = 0;
  for (const auto& [id, node] : nodes) {
    if (node.is_leaf()) ++count;
  }
  return count;
}

void RegressionTree::check_structure() const {
  if (!nodes.count(1)) throw std::runtime_error("tree: missing root");
  for (const auto& [id, node] : nodes) {
    if (id != 1 && !nodes.count(parent_id(id))) {
      throw std::runtime_error("tree: orphan node " + std::to_string(id));
    }
    bool has_left = nodes.count(left_child_id(id)) > 0;
    bool has_right = nodes.count(right_child_id(id)) > 0;
    if (has_left != has_right) throw std::runtime_error("tree: single-child node");
    if (node.is_leaf() == has_left) {
      throw std::runtime_error("tree: rule/children mismatch at node " + std::to_string(id));
    }
    if (node_depth(id) > kMaxTreeDepth) throw std::runtime_error("tree: depth cap exceeded");
  }
}

namespace {

bool rule_sends_left(const DecisionRule& rule, const Dataset& ds, int row) {
  if (rule.kind == RuleKind::Continuous) {
    return rule.sends_left_continuous(ds.x_cont[rule.var][row]);
  }
  return rule.sends_left_level(ds.x_cat[rule.var - ds.n_cont()][row]);
}

}  // namespace

NodeId traverse(const RegressionTree& t, const Dataset& ds, int row) {
  NodeId id = 1;
  const TreeNode* node = &t.at(id);
  while (!node->is_leaf()) {
    id = rule_sends_left(*node->rule, ds, row) ? left_child_id(id) : right_child_id(id);
    node = &t.at(id);
  }
  return id;
}

double evaluate(const RegressionTree& t, const Dataset& ds, int row) {
  return t.at(traverse(t, ds, row)).jump;
}

NodeId traverse_point(const RegressionTree& t, const std::vector<double>& x_cont,
                      const std::vector<int>& x_cat, int p_cont) {
  NodeId id = 1;
  const TreeNode* node = &t.at(id);
  while (!node->is_leaf()) {
    const DecisionRule& rule = *node->rule;
    bool left = rule.kind == RuleKind::Continuous
                    ? rule.sends_left_continuous(x_cont[rule.var])
                    : rule.sends_left_level(x_cat[rule.var - p_cont]);
    id = left ? left_child_id(id) : right_child_id(id);
    node = &t.at(id);
  }
  return id;
}

AvailableInterval available_interval(const RegressionTree& t, NodeId id, int var) {
  AvailableInterval iv;
  NodeId cur = id;
  while (cur > 1) {
    NodeId par = parent_id(cur);
    const DecisionRule& rule = *t.at(par).rule;
    if (rule.kind == RuleKind::Continuous && rule.var == var) {
      if (cur == left_child_id(par)) {
        iv.hi = std::min(iv.hi, rule.cut);
      } else {
        iv.lo = std::max(iv.lo, rule.cut);
      }
    }
    cur = par;
  }
  return iv;
}

std::vector<int> available_levels(const RegressionTree& t, NodeId id, int var, int n_levels) {
  // Collect the splits on this variable along the root path, then apply
  // them root-down: each one replaces the set by its left or right branch.
  std::vector<std::pair<NodeId, bool>> path;  // (ancestor, went_left)
  NodeId cur = id;
  while (cur > 1) {
    NodeId par = parent_id(cur);
    path.emplace_back(par, cur == left_child_id(par));
    cur = par;
  }
  std::vector<int> avail(n_levels);
  for (int l = 0; l < n_levels; ++l) avail[l] = l;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const DecisionRule& rule = *t.at(it->first).rule;
    if (rule.kind != RuleKind::Categorical || rule.var != var) continue;
    const std::vector<int>& keep = it->second ? rule.left_levels : rule.right_levels;
    std::vector<int> next;
    std::set_intersection(avail.begin(), avail.end(), keep.begin(), keep.end(),
                          std::back_inserter(next));
    avail = std::move(next);
  }
  return avail;
}

void birth(RegressionTree& t, SuffStatMap& ssm, NodeId leaf_id, const DecisionRule& rule,
           const Dataset& ds) {
  TreeNode& node = t.at(leaf_id);
  if (!node.is_leaf()) throw std::runtime_error("birth: target is not a leaf");
  if (node_depth(leaf_id) + 1 > kMaxTreeDepth) throw std::runtime_error("birth: depth cap");

  if (rule.kind == RuleKind::Continuous) {
    if (rule.var < 0 || rule.var >= ds.n_cont()) throw std::runtime_error("birth: bad variable");
    AvailableInterval iv = available_interval(t, leaf_id, rule.var);
    if (ds.cont_ranges[rule.var].degenerate || !(rule.cut > iv.lo && rule.cut < iv.hi)) {
      throw std::runtime_error("birth: cutpoint outside the available interval");
    }
  } else {
    const int col = rule.var - ds.n_cont();
    if (col < 0 || col >= ds.n_cat()) throw std::runtime_error("birth: bad categorical variable");
    auto cat_cols = ds.schema.categorical_cols();
    int n_levels = static_cast<int>(ds.schema.columns[cat_cols[col]].levels.size());
    std::vector<int> avail = available_levels(t, leaf_id, rule.var, n_levels);
    std::vector<int> both;
    std::merge(rule.left_levels.begin(), rule.left_levels.end(), rule.right_levels.begin(),
               rule.right_levels.end(), std::back_inserter(both));
    if (rule.left_levels.empty() || rule.right_levels.empty() || both != avail) {
      throw std::runtime_error("birth: branch sets do not partition the available set");
    }
  }

  node.rule = rule;
  t.nodes[left_child_id(leaf_id)] = TreeNode{};
  t.nodes[right_child_id(leaf_id)] = TreeNode{};

  auto it = ssm.find(leaf_id);
  if (it != ssm.end()) {
    std::vector<int> left, right;
    for (int i : it->second) {
      (rule_sends_left(rule, ds, i) ? left : right).push_back(i);
    }
    ssm.erase(it);
    ssm[left_child_id(leaf_id)] = std::move(left);
    ssm[right_child_id(leaf_id)] = std::move(right);
  }
}

void death(RegressionTree& t, SuffStatMap& ssm, NodeId nog_id) {
  NodeId lid = left_child_id(nog_id), rid = right_child_id(nog_id);
  if (t.at(nog_id).is_leaf()) throw std::runtime_error("death: target is a leaf");
  if (!t.at(lid).is_leaf() || !t.at(rid).is_leaf()) {
    throw std::runtime_error("death: target has grandchildren");
  }
  t.at(nog_id).rule.reset();
  t.at(nog_id).jump = 0.0;
  t.nodes.erase(lid);
  t.nodes.erase(rid);

  auto lit = ssm.find(lid), rit = ssm.find(rid);
  if (lit != ssm.end() && rit != ssm.end()) {
    std::vector<int> merged;
    merged.reserve(lit->second.size() + rit->second.size());
    std::merge(lit->second.begin(), lit->second.end(), rit->second.begin(), rit->second.end(),
               std::back_inserter(merged));
    ssm.erase(lit);
    ssm.erase(rit);
    ssm[nog_id] = std::move(merged);
  }
}

std::vector<NodeId> leaf_ids(const RegressionTree& t) {
  std::vector<NodeId> out;
  for (const auto& [id, node] : t.nodes) {
    if (node.is_leaf()) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> nog_ids(const RegressionTree& t) {
  std::vector<NodeId> out;
  for (const auto& [id, node] : t.nodes) {
    if (!node.is_leaf() && t.at(left_child_id(id)).is_leaf() && t.at(right_child_id(id)).is_leaf()) {
      out.push_back(id);
    }
  }
  return out;
}

SuffStatMap suff_stat_from_scratch(const RegressionTree& t, const Dataset& ds) {
  SuffStatMap ssm;
  for (NodeId id : leaf_ids(t)) ssm[id];  // empty leaves keep their key
  for (int i = 0; i < ds.n; ++i) ssm[traverse(t, ds, i)].push_back(i);
  return ssm;
}

namespace {

void append_preorder(const RegressionTree& t, NodeId id, json& nodes) {
  const TreeNode& node = t.at(id);
  json jn;
  jn["id"] = id;
  if (node.is_leaf()) {
    jn["jump"] = node.jump;
  } else {
    const DecisionRule& rule = *node.rule;
    json jr;
    jr["var"] = rule.var;
    if (rule.kind == RuleKind::Continuous) {
      jr["kind"] = "cont";
      jr["cut"] = rule.cut;
    } else {
      jr["kind"] = "cat";
      jr["left"] = rule.left_levels;
      jr["right"] = rule.right_levels;
    }
    jn["rule"] = jr;
    jn["jump"] = nullptr;
  }
  nodes.push_back(jn);
  if (!node.is_leaf()) {
    append_preorder(t, left_child_id(id), nodes);
    append_preorder(t, right_child_id(id), nodes);
  }
}

}  // namespace

std::string tree_to_json(const RegressionTree& t) {
  json nodes = json::array();
  append_preorder(t, 1, nodes);
  return json{{"nodes", nodes}}.dump();
}

RegressionTree tree_from_json(const std::string& text) {
  json j = json::parse(text);
  RegressionTree t;
  t.nodes.clear();
  for (const auto& jn : j.at("nodes")) {
    NodeId id = jn.at("id").get<NodeId>();
    TreeNode node;
    if (jn.contains("rule") && !jn["rule"].is_null()) {
      DecisionRule rule;
      const auto& jr = jn["rule"];
      rule.var = jr.at("var").get<int>();
      std::string kind = jr.at("kind").get<std::string>();
      if (kind == "cont") {
        rule.kind = RuleKind::Continuous;
        rule.cut = jr.at("cut").get<double>();
      } else if (kind == "cat") {
        rule.kind = RuleKind::Categorical;
        rule.left_levels = jr.at("left").get<std::vector<int>>();
        rule.right_levels = jr.at("right").get<std::vector<int>>();
      } else {
        throw std::runtime_error("tree json: unknown rule kind '" + kind + "'");
      }
      node.rule = std::move(rule);
    } else {
      node.jump = jn.at("jump").get<double>();
    }
    t.nodes[id] = std::move(node);
  }
  t.check_structure();
  return t;
}

}  // namespace netbart
