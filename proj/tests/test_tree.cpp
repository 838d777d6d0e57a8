#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netbart/prior.hpp"
#include "netbart/tree.hpp"

using namespace netbart;

namespace {

Dataset make_ds(std::vector<std::vector<double>> cont, std::vector<std::vector<int>> cat,
                std::vector<int> n_levels) {
  Dataset ds;
  ds.n = cont.empty() ? static_cast<int>(cat.front().size())
                      : static_cast<int>(cont.front().size());
  for (std::size_t j = 0; j < cont.size(); ++j) {
    ColumnSpec col;
    col.name = "x" + std::to_string(j + 1);
    ds.schema.columns.push_back(col);
    ds.cont_ranges.push_back({0.0, 1.0, false});
    ds.scaled_cutpoints.emplace_back();
  }
  for (std::size_t j = 0; j < cat.size(); ++j) {
    ColumnSpec col;
    col.name = "g" + std::to_string(j + 1);
    col.kind = ColumnKind::Categorical;
    for (int l = 0; l < n_levels[j]; ++l) col.levels.push_back("c" + std::to_string(l + 1));
    ds.schema.columns.push_back(col);
  }
  ds.x_cont = std::move(cont);
  ds.x_cat = std::move(cat);
  ds.validate();
  return ds;
}

DecisionRule cont_rule(int var, double cut) {
  DecisionRule r;
  r.var = var;
  r.kind = RuleKind::Continuous;
  r.cut = cut;
  return r;
}

DecisionRule cat_rule(int var, std::vector<int> left, std::vector<int> right) {
  DecisionRule r;
  r.var = var;
  r.kind = RuleKind::Categorical;
  r.left_levels = std::move(left);
  r.right_levels = std::move(right);
  return r;
}

}  // namespace

TEST_CASE("traverse and evaluate on simple trees") {
  Dataset ds = make_ds({{0.3, 0.9}}, {{2, 1}}, {10});

  RegressionTree root_only;
  root_only.at(1).jump = 0.7;
  for (int i = 0; i < 2; ++i) {
    CHECK(traverse(root_only, ds, i) == 1);
    CHECK(evaluate(root_only, ds, i) == 0.7);
  }

  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  t.at(2).jump = -1.0;
  t.at(3).jump = 2.0;
  CHECK(traverse(t, ds, 0) == 2);  // 0.3 < 0.5
  CHECK(traverse(t, ds, 1) == 3);  // 0.9 >= 0.5
  CHECK(evaluate(t, ds, 1) == 2.0);

  RegressionTree tc;
  SuffStatMap ssc = suff_stat_from_scratch(tc, ds);
  // Rule {X in {c1, c3}} on the categorical column (global var index 1).
  birth(tc, ssc, 1, cat_rule(1, {0, 2}, {1, 3, 4, 5, 6, 7, 8, 9}), ds);
  CHECK(traverse(tc, ds, 0) == 2);  // level index 2 = c3
  CHECK(traverse(tc, ds, 1) == 3);  // level index 1 = c2
}

TEST_CASE("equality goes right on a continuous rule") {
  Dataset ds = make_ds({{0.5}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  CHECK(traverse(t, ds, 0) == 3);
}

TEST_CASE("available interval narrows along the path") {
  Dataset ds = make_ds({{0.1, 0.5, 0.9}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  AvailableInterval root_iv = available_interval(t, 1, 0);
  CHECK(root_iv.lo == 0.0);
  CHECK(root_iv.hi == 1.0);

  birth(t, ssm, 1, cont_rule(0, 0.6), ds);
  AvailableInterval left = available_interval(t, 2, 0);
  CHECK(left.lo == 0.0);
  CHECK(left.hi == 0.6);
  AvailableInterval right = available_interval(t, 3, 0);
  CHECK(right.lo == 0.6);
  CHECK(right.hi == 1.0);
}

TEST_CASE("available levels intersect ancestor branch sets") {
  Dataset ds = make_ds({}, {{0, 1, 2}}, {5});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  CHECK(available_levels(t, 1, 0, 5) == std::vector<int>{0, 1, 2, 3, 4});

  // {a,b,c} left at root, then {a} left at node 2; grandchild 4 sees {a}.
  birth(t, ssm, 1, cat_rule(0, {0, 1, 2}, {3, 4}), ds);
  birth(t, ssm, 2, cat_rule(0, {0}, {1, 2}), ds);
  CHECK(available_levels(t, 4, 0, 5) == std::vector<int>{0});
  CHECK(available_levels(t, 5, 0, 5) == std::vector<int>{1, 2});
  CHECK(available_levels(t, 3, 0, 5) == std::vector<int>{3, 4});
}

TEST_CASE("availability is inherited downward") {
  Dataset ds = make_ds({{0.2, 0.4, 0.6, 0.8}}, {{0, 1, 2, 3}}, {4});
  Rng rng(3);
  PriorConfig cfg;
  cfg.alpha = 0.9;
  NetworkMap none;
  PredictorSpace space = make_space(ds, none, cfg);
  for (int rep = 0; rep < 50; ++rep) {
    RegressionTree t = draw_prior_tree(space, cfg, rng);
    for (const auto& [id, node] : t.nodes) {
      if (id == 1) continue;
      AvailableInterval child = available_interval(t, id, 0);
      AvailableInterval parent = available_interval(t, parent_id(id), 0);
      CHECK(child.lo >= parent.lo);
      CHECK(child.hi <= parent.hi);
      auto cl = available_levels(t, id, 1, 4);
      auto pl = available_levels(t, parent_id(id), 1, 4);
      CHECK(std::includes(pl.begin(), pl.end(), cl.begin(), cl.end()));
    }
  }
}

TEST_CASE("birth splits the suff-stat map by routing the new rule") {
  Dataset ds = make_ds({{0.1, 0.2, 0.7, 0.9}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  REQUIRE(ssm.size() == 2);
  CHECK(ssm.at(2) == std::vector<int>{0, 1});
  CHECK(ssm.at(3) == std::vector<int>{2, 3});
  CHECK(ssm == suff_stat_from_scratch(t, ds));

  CHECK_THROWS(birth(t, ssm, 1, cont_rule(0, 0.5), ds));  // not a leaf
  CHECK_THROWS(birth(t, ssm, 2, cont_rule(0, 0.8), ds));  // cut outside [0,0.5)
}

TEST_CASE("birth validates categorical partitions against availability") {
  Dataset ds = make_ds({}, {{0, 1, 2, 3}}, {4});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  CHECK_THROWS(birth(t, ssm, 1, cat_rule(0, {0}, {1, 2}), ds));      // misses level 3
  CHECK_THROWS(birth(t, ssm, 1, cat_rule(0, {}, {0, 1, 2, 3}), ds)); // empty side
  birth(t, ssm, 1, cat_rule(0, {0, 3}, {1, 2}), ds);
  CHECK(ssm.at(2) == std::vector<int>{0, 3});
  CHECK(ssm.at(3) == std::vector<int>{1, 2});
}

TEST_CASE("death exactly inverts the preceding birth") {
  Dataset ds = make_ds({{0.1, 0.6, 0.3, 0.8, 0.45}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  birth(t, ssm, 2, cont_rule(0, 0.2), ds);
  RegressionTree t_before = t;
  SuffStatMap ssm_before = ssm;

  birth(t, ssm, 5, cont_rule(0, 0.4), ds);
  death(t, ssm, 5);
  CHECK(t.nodes.size() == t_before.nodes.size());
  CHECK(ssm == ssm_before);
  for (const auto& [id, node] : t.nodes) CHECK(node.is_leaf() == t_before.at(id).is_leaf());

  death(t, ssm, 2);
  death(t, ssm, 1);
  CHECK(t.nodes.size() == 1);
  CHECK(ssm.at(1) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS(death(t, ssm, 1));  // root is now a leaf
}

TEST_CASE("death rejects nodes with grandchildren and merges sorted") {
  Dataset ds = make_ds({{0.05, 0.15, 0.55, 0.95}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  birth(t, ssm, 2, cont_rule(0, 0.1), ds);
  CHECK_THROWS(death(t, ssm, 1));
  death(t, ssm, 2);
  CHECK(ssm.at(2) == std::vector<int>{0, 1});
}

TEST_CASE("leaf and nog id lists") {
  Dataset ds = make_ds({{0.1, 0.9}}, {}, {});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  CHECK(leaf_ids(t) == std::vector<NodeId>{1});
  CHECK(nog_ids(t).empty());

  birth(t, ssm, 1, cont_rule(0, 0.5), ds);
  CHECK(leaf_ids(t) == std::vector<NodeId>{2, 3});
  CHECK(nog_ids(t) == std::vector<NodeId>{1});

  birth(t, ssm, 2, cont_rule(0, 0.3), ds);
  birth(t, ssm, 3, cont_rule(0, 0.7), ds);
  CHECK(leaf_ids(t) == std::vector<NodeId>{4, 5, 6, 7});
  CHECK(nog_ids(t) == std::vector<NodeId>{2, 3});
}

TEST_CASE("canonical label arithmetic") {
  CHECK(node_depth(1) == 0);
  CHECK(node_depth(2) == 1);
  CHECK(node_depth(3) == 1);
  CHECK(node_depth(7) == 2);
  for (NodeId id : {NodeId{2}, NodeId{5}, NodeId{12}, NodeId{1023}}) {
    CHECK(parent_id(left_child_id(id)) == id);
    CHECK(parent_id(right_child_id(id)) == id);
    CHECK(node_depth(left_child_id(id)) == node_depth(id) + 1);
  }
}

TEST_CASE("every schema-valid point lands in exactly one leaf") {
  Rng rng(9);
  PriorConfig cfg;
  NetworkMap none;
  std::vector<std::vector<double>> cont(2);
  std::vector<std::vector<int>> cat(1);
  for (int i = 0; i < 200; ++i) {
    cont[0].push_back(rng.uniform());
    cont[1].push_back(rng.uniform());
    cat[0].push_back(static_cast<int>(rng.uniform_int(6)));
  }
  Dataset ds = make_ds(std::move(cont), std::move(cat), {6});
  PredictorSpace space = make_space(ds, none, cfg);
  RegressionTree t = draw_prior_tree(space, cfg, rng);

  std::vector<double> x(2);
  std::vector<int> lv(1);
  for (int i = 0; i < 10000; ++i) {
    x[0] = rng.uniform();
    x[1] = rng.uniform();
    lv[0] = static_cast<int>(rng.uniform_int(6));
    NodeId leaf = traverse_point(t, x, lv, 2);
    CHECK(t.at(leaf).is_leaf());
  }
}

TEST_CASE("tree json round-trips exactly") {
  Dataset ds = make_ds({{0.11, 0.52, 0.93}}, {{0, 1, 2}}, {3});
  RegressionTree t;
  SuffStatMap ssm = suff_stat_from_scratch(t, ds);
  birth(t, ssm, 1, cont_rule(0, 1.0 / 3.0), ds);
  birth(t, ssm, 3, cat_rule(1, {0, 2}, {1}), ds);
  t.at(2).jump = -1.25;
  t.at(6).jump = 0.1 + 0.2;  // not exactly 0.3
  t.at(7).jump = -0.0;

  std::string json = tree_to_json(t);
  RegressionTree back = tree_from_json(json);
  REQUIRE(back.nodes.size() == t.nodes.size());
  for (const auto& [id, node] : t.nodes) {
    const TreeNode& other = back.at(id);
    CHECK(node.is_leaf() == other.is_leaf());
    if (node.is_leaf()) {
      CHECK(std::memcmp(&node.jump, &other.jump, sizeof(double)) == 0);
    } else {
      CHECK(node.rule->var == other.rule->var);
      CHECK(node.rule->kind == other.rule->kind);
      CHECK(node.rule->cut == other.rule->cut);
      CHECK(node.rule->left_levels == other.rule->left_levels);
      CHECK(node.rule->right_levels == other.rule->right_levels);
    }
  }
  CHECK(tree_to_json(back) == json);
}

TEST_CASE("corrupt level routing is reported") {
  DecisionRule r = cat_rule(0, {0, 1}, {2});
  CHECK(r.sends_left_level(1));
  CHECK_FALSE(r.sends_left_level(2));
  CHECK_THROWS(r.sends_left_level(3));
}
