#include "netbart/prior.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netbart {

SplitStrategy parse_strategy(const std::string& name) {
  if (name == "unif") return SplitStrategy::Unif;
  if (name == "gs1") return SplitStrategy::Gs1;
  if (name == "gs2") return SplitStrategy::Gs2;
  if (name == "gs3") return SplitStrategy::Gs3;
  if (name == "gs4") return SplitStrategy::Gs4;
  throw std::runtime_error("unknown split strategy '" + name + "'");
}

std::string strategy_name(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::Unif: return "unif";
    case SplitStrategy::Gs1: return "gs1";
    case SplitStrategy::Gs2: return "gs2";
    case SplitStrategy::Gs3: return "gs3";
    case SplitStrategy::Gs4: return "gs4";
  }
  return "unif";
}

SplitStrategy PriorConfig::strategy_for(const std::string& column) const {
  auto it = strategies.find(column);
  return it == strategies.end() ? SplitStrategy::Unif : it->second;
}

void PriorConfig::validate() const {
  // alpha = 0 is allowed as the degenerate always-root-only prior.
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::runtime_error("prior: alpha must be in [0,1)");
  if (beta < 0.0) throw std::runtime_error("prior: beta must be >= 0");
  if (n_trees < 1) throw std::runtime_error("prior: need at least one tree");
  if (!(tau_total > 0.0)) throw std::runtime_error("prior: tau_total must be positive");
  if (!(nu > 0.0)) throw std::runtime_error("prior: nu must be positive");
  if (!(lambda > 0.0)) throw std::runtime_error("prior: lambda must be positive");
}

PredictorSpace make_space(const Dataset& ds, const NetworkMap& networks, const PriorConfig& cfg) {
  PredictorSpace space;
  for (int j = 0; j < ds.n_cont(); ++j) {
    space.cont.push_back({ds.cont_ranges[j].degenerate,
                          ds.scaled_cutpoints[j].empty() ? nullptr : &ds.scaled_cutpoints[j]});
  }
  auto cat_cols = ds.schema.categorical_cols();
  for (int j = 0; j < ds.n_cat(); ++j) {
    const ColumnSpec& col = ds.schema.columns[cat_cols[j]];
    PredictorSpace::Cat cat;
    cat.n_levels = static_cast<int>(col.levels.size());
    cat.strategy = cfg.strategy_for(col.name);
    if (col.kind == ColumnKind::Network) {
      auto it = networks.find(col.network);
      if (it == networks.end()) {
        throw std::runtime_error("no network '" + col.network + "' for column '" + col.name + "'");
      }
      if (it->second.vertices != col.levels) {
        throw std::runtime_error("network '" + col.network +
                                 "' vertex set does not match the levels of column '" + col.name +
                                 "'");
      }
      cat.network = &it->second;
    }
    space.cat.push_back(cat);
  }
  return space;
}

PredictorSpace make_space(const PredictorSchema& schema, const NetworkMap& networks,
                          const PriorConfig& cfg) {
  PredictorSpace space;
  // Raw-unit cutpoint grids cannot be mapped to [0,1] without data, so
  // schema-only spaces fall back to continuous-uniform cutpoint draws.
  space.cont.assign(schema.n_continuous(), {false, nullptr});
  for (int ci : schema.categorical_cols()) {
    const ColumnSpec& col = schema.columns[ci];
    PredictorSpace::Cat cat;
    cat.n_levels = static_cast<int>(col.levels.size());
    cat.strategy = cfg.strategy_for(col.name);
    if (col.kind == ColumnKind::Network) {
      auto it = networks.find(col.network);
      if (it == networks.end()) {
        throw std::runtime_error("no network '" + col.network + "' for column '" + col.name + "'");
      }
      cat.network = &it->second;
    }
    space.cat.push_back(cat);
  }
  return space;
}

std::vector<NodeId> draw_tree_structure(const PriorConfig& cfg, Rng& rng) {
  for (;;) {
    std::vector<NodeId> ids;
    bool overflow = false;
    // Preorder branching process.
    auto visit = [&](auto&& self, NodeId id, int depth) -> void {
      if (overflow) return;
      ids.push_back(id);
      if (rng.bernoulli(cfg.grow_prob(depth))) {
        if (depth + 1 > kMaxTreeDepth) {
          overflow = true;
          return;
        }
        self(self, left_child_id(id), depth + 1);
        self(self, right_child_id(id), depth + 1);
      }
    };
    visit(visit, 1, 0);
    if (!overflow) {
      std::sort(ids.begin(), ids.end());
      return ids;
    }
  }
}

DecisionRule draw_rule(const RegressionTree& t, NodeId node_id, const PredictorSpace& space,
                       Rng& rng) {
  struct Candidate {
    int var;
    AvailableInterval interval;       // continuous
    std::vector<double> grid_points;  // continuous with grid
    std::vector<int> levels;          // categorical
  };
  std::vector<Candidate> eligible;
  for (int j = 0; j < space.n_cont(); ++j) {
    if (space.cont[j].degenerate) continue;
    AvailableInterval iv = available_interval(t, node_id, j);
    if (!iv.nonempty()) continue;
    Candidate c{j, iv, {}, {}};
    if (space.cont[j].grid && !space.cont[j].grid->empty()) {
      for (double g : *space.cont[j].grid) {
        if (g > iv.lo && g < iv.hi) c.grid_points.push_back(g);
      }
      if (c.grid_points.empty()) continue;
    }
    eligible.push_back(std::move(c));
  }
  for (int j = 0; j < space.n_cat(); ++j) {
    std::vector<int> avail = available_levels(t, node_id, space.n_cont() + j, space.cat[j].n_levels);
    if (avail.size() < 2) continue;
    eligible.push_back({space.n_cont() + j, {}, {}, std::move(avail)});
  }
  if (eligible.empty()) throw NoValidRuleError();

  const Candidate& pick = eligible[rng.uniform_int(eligible.size())];
  DecisionRule rule;
  rule.var = pick.var;
  if (pick.var < space.n_cont()) {
    rule.kind = RuleKind::Continuous;
    if (!pick.grid_points.empty()) {
      rule.cut = pick.grid_points[rng.uniform_int(pick.grid_points.size())];
    } else {
      rule.cut = rng.uniform_open(pick.interval.lo, pick.interval.hi);
    }
    return rule;
  }

  rule.kind = RuleKind::Categorical;
  const PredictorSpace::Cat& cat = space.cat[pick.var - space.n_cont()];
  if (cat.network == nullptr || cat.strategy == SplitStrategy::Unif) {
    // Uniform over the 2^|A| - 2 non-trivial subsets, by rejection.
    for (;;) {
      rule.left_levels.clear();
      rule.right_levels.clear();
      for (int level : pick.levels) {
        (rng.bernoulli(0.5) ? rule.left_levels : rule.right_levels).push_back(level);
      }
      if (!rule.left_levels.empty() && !rule.right_levels.empty()) return rule;
    }
  }

  VertexBipartition bip;
  switch (cat.strategy) {
    case SplitStrategy::Gs1: bip = split_gs1_on(*cat.network, pick.levels); break;
    case SplitStrategy::Gs2: bip = split_gs2_on(*cat.network, pick.levels, rng); break;
    case SplitStrategy::Gs3: bip = split_gs3_on(*cat.network, pick.levels, rng); break;
    case SplitStrategy::Gs4: bip = split_gs4_on(*cat.network, pick.levels, rng); break;
    case SplitStrategy::Unif: break;  // unreachable
  }
  rule.left_levels = std::move(bip.left);
  rule.right_levels = std::move(bip.right);
  return rule;
}

void draw_jumps(RegressionTree& t, const PriorConfig& cfg, Rng& rng) {
  const double sd = cfg.tau_leaf();
  for (auto& [id, node] : t.nodes) {
    if (node.is_leaf()) node.jump = cfg.mu0 + sd * rng.normal();
  }
}

RegressionTree draw_prior_tree(const PredictorSpace& space, const PriorConfig& cfg, Rng& rng) {
  std::vector<NodeId> ids = draw_tree_structure(cfg, rng);
  auto is_internal = [&](NodeId id) {
    return std::binary_search(ids.begin(), ids.end(), left_child_id(id));
  };

  RegressionTree t;
  // Rules are assigned top-down so each draw sees its ancestors' rules;
  // a node whose available sets admit no rule becomes a leaf.
  auto build = [&](auto&& self, NodeId id) -> void {
    if (!is_internal(id)) return;
    DecisionRule rule;
    try {
      rule = draw_rule(t, id, space, rng);
    } catch (const NoValidRuleError&) {
      return;
    }
    t.at(id).rule = std::move(rule);
    t.nodes[left_child_id(id)] = TreeNode{};
    t.nodes[right_child_id(id)] = TreeNode{};
    self(self, left_child_id(id));
    self(self, right_child_id(id));
  };
  build(build, 1);
  draw_jumps(t, cfg, rng);
  return t;
}

LevelPartition canonical_partition(std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return LevelPartition{std::move(blocks)};
}

LevelPartition induced_level_partition(const RegressionTree& t, const PredictorSpace& space,
                                       int column) {
  if (column < 0 || column >= space.n_cat()) {
    throw std::runtime_error("induced_level_partition: bad column");
  }
  std::vector<double> x_cont(space.n_cont(), 0.5);
  std::vector<int> x_cat(space.n_cat(), 0);
  std::map<NodeId, std::vector<int>> by_leaf;
  for (int level = 0; level < space.cat[column].n_levels; ++level) {
    x_cat[column] = level;
    by_leaf[traverse_point(t, x_cont, x_cat, space.n_cont())].push_back(level);
  }
  std::vector<std::vector<int>> blocks;
  for (auto& [leaf, levels] : by_leaf) blocks.push_back(std::move(levels));
  return canonical_partition(std::move(blocks));
}

LevelPartition induced_level_partition_onehot(const RegressionTree& t, int p_cont,
                                              int block_start, int K) {
  if (block_start < 0 || block_start + K > p_cont) {
    throw std::runtime_error("induced_level_partition_onehot: block out of range");
  }
  std::vector<double> x_cont(p_cont, 0.5);
  for (int k = 0; k < K; ++k) x_cont[block_start + k] = 0.0;
  std::vector<int> x_cat;
  std::map<NodeId, std::vector<int>> by_leaf;
  for (int k = 0; k < K; ++k) {
    x_cont[block_start + k] = 1.0;
    by_leaf[traverse_point(t, x_cont, x_cat, p_cont)].push_back(k);
    x_cont[block_start + k] = 0.0;
  }
  std::vector<std::vector<int>> blocks;
  for (auto& [leaf, levels] : by_leaf) blocks.push_back(std::move(levels));
  return canonical_partition(std::move(blocks));
}

std::uint64_t count_onehot_partitions(int K) {
  if (K < 1) throw std::runtime_error("count_onehot_partitions: K must be >= 1");
  if (K > 62) throw std::runtime_error("count_onehot_partitions: K > 62 overflows");
  return (std::uint64_t{1} << K) - static_cast<std::uint64_t>(K);
}

std::uint64_t bell_number(int K) {
  if (K < 1 || K > 25) throw std::runtime_error("bell_number: K must be in [1, 25]");
  // Bell triangle; row k ends with Bell(k+1).
  std::vector<std::uint64_t> row{1};
  for (int r = 1; r < K; ++r) {
    std::vector<std::uint64_t> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

namespace {

LevelPartition partition_of_draw(const PriorConfig& cfg, const PredictorSpace& space,
                                 const ColumnProbe& probe, Rng& rng) {
  RegressionTree t = draw_prior_tree(space, cfg, rng);
  if (probe.mode == ColumnProbe::Levels) {
    return induced_level_partition(t, space, probe.column);
  }
  return induced_level_partition_onehot(t, space.n_cont(), probe.block_start, probe.n_levels);
}

int probe_width(const PredictorSpace& space, const ColumnProbe& probe) {
  return probe.mode == ColumnProbe::Levels ? space.cat[probe.column].n_levels : probe.n_levels;
}

Eigen::MatrixXd coclust_impl(const PriorConfig& cfg, const PredictorSpace& space,
                             const ColumnProbe& probe, int n_draws, std::uint64_t seed,
                             bool parallel) {
  if (n_draws < 1) throw std::runtime_error("co_clustering_matrix: n_draws must be >= 1");
  const int K = probe_width(space, probe);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(K) * K, 0);

  auto accumulate_draw = [&](int draw, std::vector<std::int64_t>& acc) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(draw)));
    LevelPartition part = partition_of_draw(cfg, space, probe, rng);
    for (const auto& block : part.blocks) {
      for (std::size_t a = 0; a < block.size(); ++a) {
        for (std::size_t b = a + 1; b < block.size(); ++b) {
          ++acc[static_cast<std::size_t>(block[a]) * K + block[b]];
        }
      }
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      std::vector<std::int64_t> local(counts.size(), 0);
#pragma omp for schedule(static)
      for (int d = 0; d < n_draws; ++d) accumulate_draw(d, local);
#pragma omp critical
      for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += local[i];
    }
#else
    for (int d = 0; d < n_draws; ++d) accumulate_draw(d, counts);
#endif
  } else {
    for (int d = 0; d < n_draws; ++d) accumulate_draw(d, counts);
  }

  Eigen::MatrixXd prob = Eigen::MatrixXd::Zero(K, K);
  for (int a = 0; a < K; ++a) {
    prob(a, a) = 1.0;
    for (int b = a + 1; b < K; ++b) {
      double p = static_cast<double>(counts[static_cast<std::size_t>(a) * K + b]) / n_draws;
      prob(a, b) = p;
      prob(b, a) = p;
    }
  }
  return prob;
}

}  // namespace

Eigen::MatrixXd co_clustering_matrix(const PriorConfig& cfg, const PredictorSpace& space,
                                     const ColumnProbe& probe, int n_draws, std::uint64_t seed) {
  return coclust_impl(cfg, space, probe, n_draws, seed, true);
}

Eigen::MatrixXd co_clustering_matrix_serial(const PriorConfig& cfg, const PredictorSpace& space,
                                            const ColumnProbe& probe, int n_draws,
                                            std::uint64_t seed) {
  return coclust_impl(cfg, space, probe, n_draws, seed, false);
}

LevelPartition draw_prior_network_partition(const PriorConfig& cfg, const Network& network,
                                            SplitStrategy strategy, Rng& rng) {
  PredictorSpace space;
  PredictorSpace::Cat cat;
  cat.n_levels = network.size();
  cat.network = &network;
  cat.strategy = strategy;
  space.cat.push_back(cat);
  RegressionTree t = draw_prior_tree(space, cfg, rng);
  return induced_level_partition(t, space, 0);
}

}  // namespace netbart
