#include "netbart/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "netbart/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netbart {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LeafStats make_leaf_stats(std::int64_t count, double residual_sum, double sigma,
                          double tau_leaf, double mu0) {
  LeafStats s;
  s.count = count;
  s.residual_sum = residual_sum;
  const double inv_s2 = 1.0 / (sigma * sigma);
  const double inv_t2 = 1.0 / (tau_leaf * tau_leaf);
  s.P = inv_s2 * static_cast<double>(count) + inv_t2;
  s.Theta = inv_s2 * residual_sum + inv_t2 * mu0;
  return s;
}

double leaf_log_marginal(const LeafStats& stats, double tau_leaf, double mu0) {
  return -std::log(tau_leaf) - 0.5 * std::log(stats.P) +
         stats.Theta * stats.Theta / (2.0 * stats.P) -
         mu0 * mu0 / (2.0 * tau_leaf * tau_leaf);
}

void ChainConfig::validate() const {
  if (n_iterations < 1) throw std::runtime_error("chain: n_iterations must be >= 1");
  if (n_burnin < 0 || n_burnin >= n_iterations) {
    throw std::runtime_error("chain: burn-in must lie in [0, n_iterations)");
  }
  if (thin < 1) throw std::runtime_error("chain: thin must be >= 1");
  if (!(q_grow > 0.0 && q_grow < 1.0)) throw std::runtime_error("chain: q_grow must be in (0,1)");
  if (min_leaf_size < 0) throw std::runtime_error("chain: min_leaf_size must be >= 0");
}

EnsembleState init_state(const Dataset& ds, std::vector<double> outcome,
                         const PriorConfig& prior, std::uint64_t seed, double sigma_init) {
  if (static_cast<int>(outcome.size()) != ds.n) {
    throw std::runtime_error("init_state: outcome length mismatch");
  }
  EnsembleState state{.trees = {},
                      .ssms = {},
                      .outcome = std::move(outcome),
                      .allfit = std::vector<double>(ds.n, 0.0),
                      .residual = {},
                      .sigma = sigma_init,
                      .rng = Rng(seed),
                      .iteration = 0};
  state.residual = state.outcome;
  std::vector<int> all(ds.n);
  std::iota(all.begin(), all.end(), 0);
  state.trees.assign(prior.n_trees, RegressionTree{});
  state.ssms.assign(prior.n_trees, SuffStatMap{{NodeId{1}, all}});
  return state;
}

void remove_tree_fit(EnsembleState& state, int m) {
  const RegressionTree& t = state.trees[m];
  for (const auto& [leaf, members] : state.ssms[m]) {
    const double mu = t.at(leaf).jump;
    if (mu == 0.0) continue;
    for (int i : members) {
      state.allfit[i] -= mu;
      state.residual[i] += mu;
    }
  }
}

void restore_tree_fit(EnsembleState& state, int m) {
  const RegressionTree& t = state.trees[m];
  for (const auto& [leaf, members] : state.ssms[m]) {
    const double mu = t.at(leaf).jump;
    if (mu == 0.0) continue;
    for (int i : members) {
      state.allfit[i] += mu;
      state.residual[i] -= mu;
    }
  }
}

namespace {

LeafStats stats_of_members(const std::vector<int>& members, const EnsembleState& state,
                           const SamplerContext& ctx) {
  double sum = 0.0;
  for (int i : members) sum += state.residual[i];
  return make_leaf_stats(static_cast<std::int64_t>(members.size()), sum, state.sigma,
                         ctx.prior.tau_leaf(), ctx.prior.mu0);
}

bool rule_sends_left(const DecisionRule& rule, const Dataset& ds, int row) {
  if (rule.kind == RuleKind::Continuous) {
    return rule.sends_left_continuous(ds.x_cont[rule.var][row]);
  }
  return rule.sends_left_level(ds.x_cat[rule.var - ds.n_cont()][row]);
}

// Shared by grow and prune: the log prior odds of a node at depth d being
// internal with two leaf children rather than a leaf.
double log_grow_prior_ratio(const PriorConfig& prior, int depth) {
  return std::log(prior.grow_prob(depth)) + 2.0 * std::log1p(-prior.grow_prob(depth + 1)) -
         std::log1p(-prior.grow_prob(depth));
}

}  // namespace

double grow_log_accept(const EnsembleState& state, int m, NodeId leaf_id,
                       const DecisionRule& rule, const SamplerContext& ctx) {
  const RegressionTree& t = state.trees[m];
  const auto& ssm = state.ssms[m];

  const auto it = ssm.find(leaf_id);
  if (it == ssm.end()) throw std::runtime_error("grow_log_accept: stale suff-stat map");
  std::vector<int> left, right;
  left.reserve(it->second.size());
  for (int i : it->second) {
    (rule_sends_left(rule, ctx.data, i) ? left : right).push_back(i);
  }
  if (ctx.chain.min_leaf_size > 0 &&
      (static_cast<int>(left.size()) < ctx.chain.min_leaf_size ||
       static_cast<int>(right.size()) < ctx.chain.min_leaf_size)) {
    return kNegInf;
  }

  const int n_leaf = t.n_leaves();
  const bool root_only = n_leaf == 1;
  const double q_grow = root_only ? 1.0 : ctx.chain.q_grow;
  const double q_prune_star = 1.0 - ctx.chain.q_grow;

  // Growing turns leaf_id into a nog; its parent stops being one if the
  // sibling is also a leaf.
  int n_nog_star = static_cast<int>(nog_ids(t).size()) + 1;
  if (leaf_id > 1) {
    NodeId par = parent_id(leaf_id);
    NodeId sib = leaf_id % 2 == 0 ? right_child_id(par) : left_child_id(par);
    if (t.at(sib).is_leaf()) --n_nog_star;
  }

  const double log_trans = std::log(q_prune_star) - std::log(static_cast<double>(n_nog_star)) -
                           std::log(q_grow) + std::log(static_cast<double>(n_leaf));
  const double log_prior = log_grow_prior_ratio(ctx.prior, node_depth(leaf_id));

  const double tau_leaf = ctx.prior.tau_leaf();
  const double mu0 = ctx.prior.mu0;
  const double log_like =
      leaf_log_marginal(stats_of_members(left, state, ctx), tau_leaf, mu0) +
      leaf_log_marginal(stats_of_members(right, state, ctx), tau_leaf, mu0) -
      leaf_log_marginal(stats_of_members(it->second, state, ctx), tau_leaf, mu0);

  return log_trans + log_prior + log_like;
}

double prune_log_accept(const EnsembleState& state, int m, NodeId nog_id,
                        const SamplerContext& ctx) {
  const RegressionTree& t = state.trees[m];
  const auto& ssm = state.ssms[m];
  if (t.at(nog_id).is_leaf() || !t.at(left_child_id(nog_id)).is_leaf() ||
      !t.at(right_child_id(nog_id)).is_leaf()) {
    throw std::runtime_error("prune_log_accept: target is not a no-grandchild node");
  }

  const auto& left = ssm.at(left_child_id(nog_id));
  const auto& right = ssm.at(right_child_id(nog_id));
  std::vector<int> merged;
  merged.reserve(left.size() + right.size());
  std::merge(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(merged));

  const int n_leaf_star = t.n_leaves() - 1;
  const bool star_root_only = nog_id == 1;
  const double q_grow_star = star_root_only ? 1.0 : ctx.chain.q_grow;
  const double q_prune = 1.0 - ctx.chain.q_grow;
  const int n_nog = static_cast<int>(nog_ids(t).size());

  const double log_trans = std::log(q_grow_star) - std::log(static_cast<double>(n_leaf_star)) -
                           std::log(q_prune) + std::log(static_cast<double>(n_nog));
  const double log_prior = -log_grow_prior_ratio(ctx.prior, node_depth(nog_id));

  const double tau_leaf = ctx.prior.tau_leaf();
  const double mu0 = ctx.prior.mu0;
  const double log_like =
      leaf_log_marginal(stats_of_members(merged, state, ctx), tau_leaf, mu0) -
      leaf_log_marginal(stats_of_members(left, state, ctx), tau_leaf, mu0) -
      leaf_log_marginal(stats_of_members(right, state, ctx), tau_leaf, mu0);

  return log_trans + log_prior + log_like;
}

void update_tree(EnsembleState& state, int m, const SamplerContext& ctx) {
  remove_tree_fit(state, m);

  RegressionTree& t = state.trees[m];
  SuffStatMap& ssm = state.ssms[m];

  const bool root_only = t.n_leaves() == 1;
  const bool grow = root_only || state.rng.bernoulli(ctx.chain.q_grow);

  if (grow) {
    std::vector<NodeId> leaves = leaf_ids(t);
    NodeId target = leaves[state.rng.uniform_int(leaves.size())];
    bool have_rule = true;
    DecisionRule rule;
    try {
      rule = draw_rule(t, target, ctx.space, state.rng);
    } catch (const NoValidRuleError&) {
      have_rule = false;  // proposal counts as rejected
    }
    if (have_rule) {
      const double log_alpha = grow_log_accept(state, m, target, rule, ctx);
      const double u = state.rng.uniform();
      if (std::log(u) < log_alpha) birth(t, ssm, target, rule, ctx.data);
    }
  } else {
    std::vector<NodeId> nogs = nog_ids(t);
    NodeId target = nogs[state.rng.uniform_int(nogs.size())];
    const double log_alpha = prune_log_accept(state, m, target, ctx);
    const double u = state.rng.uniform();
    if (std::log(u) < log_alpha) death(t, ssm, target);
  }

  // Conjugate jump refresh for every leaf, in node-id order.
  for (auto& [leaf, members] : ssm) {
    LeafStats s = stats_of_members(members, state, ctx);
    t.at(leaf).jump = s.Theta / s.P + state.rng.normal() / std::sqrt(s.P);
  }

  restore_tree_fit(state, m);
}

void update_sigma(EnsembleState& state, const SamplerContext& ctx) {
  double rss = 0.0;
  for (double r : state.residual) rss += r * r;
  const double nu = ctx.prior.nu;
  const double lambda = ctx.prior.lambda;
  const double draw = state.rng.chi_square(nu + state.n_obs());
  state.sigma = std::sqrt((nu * lambda + rss) / draw);
}

std::vector<double> probit_augment(EnsembleState& state, const std::vector<int>& y01) {
  if (static_cast<int>(y01.size()) != state.n_obs()) {
    throw std::runtime_error("probit_augment: outcome length mismatch");
  }
  std::vector<double> z(state.n_obs());
  for (int i = 0; i < state.n_obs(); ++i) {
    if (y01[i] != 0 && y01[i] != 1) throw std::runtime_error("probit_augment: outcome not binary");
    const double f = state.allfit[i];
    z[i] = y01[i] == 1 ? f + state.rng.truncated_normal_above(-f)
                       : f - state.rng.truncated_normal_above(f);
  }
  state.outcome = z;
  for (int i = 0; i < state.n_obs(); ++i) state.residual[i] = z[i] - state.allfit[i];
  return z;
}

namespace {

double sample_sd(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return n > 1 ? std::sqrt(ss / (n - 1)) : 1.0;
}

struct InvariantAudit {
  double max_allfit_dev = 0.0;
  double max_residual_dev = 0.0;
  std::int64_t ssm_mismatches = 0;

  void check(const EnsembleState& state, const Dataset& ds) {
    for (int i = 0; i < state.n_obs(); ++i) {
      double total = 0.0;
      for (int m = 0; m < state.n_trees(); ++m) total += evaluate(state.trees[m], ds, i);
      max_allfit_dev = std::max(max_allfit_dev, std::fabs(state.allfit[i] - total));
      max_residual_dev = std::max(
          max_residual_dev, std::fabs(state.residual[i] - (state.outcome[i] - state.allfit[i])));
    }
    for (int m = 0; m < state.n_trees(); ++m) {
      if (state.ssms[m] != suff_stat_from_scratch(state.trees[m], ds)) ++ssm_mismatches;
    }
  }
};

std::string serialize_draw(const EnsembleState& state, double sigma_orig) {
  nlohmann::json line;
  line["sigma"] = sigma_orig;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : state.trees) trees.push_back(nlohmann::json::parse(tree_to_json(t)));
  line["trees"] = trees;
  return line.dump();
}

}  // namespace

PosteriorSamples run_chain(const Dataset& data, const ChainConfig& chain, PriorConfig prior,
                           const NetworkMap& networks, const Dataset* test_data,
                           bool calibrate_lambda) {
  chain.validate();
  if (!data.has_outcome) throw std::runtime_error("run_chain: dataset has no outcome");

  PosteriorSamples out;
  out.probit = chain.probit;

  std::vector<int> y01;
  std::vector<double> ywork;
  if (chain.probit) {
    y01.resize(data.n);
    for (int i = 0; i < data.n; ++i) {
      if (data.y[i] != 0.0 && data.y[i] != 1.0) {
        throw std::runtime_error("run_chain: probit outcome must be 0/1");
      }
      y01[i] = static_cast<int>(data.y[i]);
    }
    out.scaling = OutcomeScaling{0.0, 0.5};  // identity
    ywork.assign(data.n, 0.0);               // replaced by the first augmentation
  } else {
    out.scaling = OutcomeScaling::fit(data.y);
    ywork.resize(data.n);
    for (int i = 0; i < data.n; ++i) ywork[i] = out.scaling.apply(data.y[i]);
  }

  double sd_y = chain.probit ? 1.0 : sample_sd(ywork);
  if (!(sd_y > 0.0)) sd_y = 1.0;  // constant outcome
  if (calibrate_lambda && !chain.probit) {
    prior.lambda = sd_y * sd_y * chi_square_quantile(0.1, prior.nu) / prior.nu;
  }
  prior.validate();

  const PredictorSpace space = make_space(data, networks, prior);
  const SamplerContext ctx{data, space, prior, chain};

  EnsembleState state = init_state(data, std::move(ywork), prior, chain.seed,
                                   chain.probit ? 1.0 : sd_y);

  InvariantAudit audit;

  for (int it = 0; it < chain.n_iterations; ++it) {
    state.iteration = it;
    if (chain.probit) probit_augment(state, y01);
    for (int m = 0; m < state.n_trees(); ++m) update_tree(state, m, ctx);
    if (!chain.probit) update_sigma(state, ctx);

    if (chain.check_invariants) audit.check(state, data);

    if (it >= chain.n_burnin && (it - chain.n_burnin) % chain.thin == 0) {
      const double sigma_orig = chain.probit ? 1.0 : out.scaling.invert_scale(state.sigma);
      out.sigma.push_back(sigma_orig);
      std::vector<int> counts(state.n_trees());
      for (int m = 0; m < state.n_trees(); ++m) counts[m] = state.trees[m].n_leaves();
      out.leaf_counts.push_back(std::move(counts));

      std::vector<double> fits(data.n);
      for (int i = 0; i < data.n; ++i) {
        fits[i] = chain.probit ? normal_cdf(state.allfit[i]) : out.scaling.invert(state.allfit[i]);
      }
      out.train_fit.push_back(std::move(fits));

      if (test_data != nullptr) {
        std::vector<double> tf(test_data->n, 0.0);
        for (int m = 0; m < state.n_trees(); ++m) {
          for (int i = 0; i < test_data->n; ++i) tf[i] += evaluate(state.trees[m], *test_data, i);
        }
        for (double& v : tf) v = chain.probit ? normal_cdf(v) : out.scaling.invert(v);
        out.test_fit.push_back(std::move(tf));
      }
      if (chain.save_trees) out.tree_lines.push_back(serialize_draw(state, sigma_orig));
    }
  }

  out.max_allfit_dev = audit.max_allfit_dev;
  out.max_residual_dev = audit.max_residual_dev;
  out.ssm_mismatches = audit.ssm_mismatches;
  return out;
}

PredictionResult predict(const std::vector<std::string>& tree_lines, const Dataset& x_new,
                         const OutcomeScaling& scaling, bool probit) {
  const int n_draws = static_cast<int>(tree_lines.size());
  if (n_draws == 0) throw std::runtime_error("predict: no posterior draws");
  PredictionResult out;
  out.per_draw.assign(n_draws, {});

#pragma omp parallel for schedule(dynamic)
  for (int d = 0; d < n_draws; ++d) {
    nlohmann::json line = nlohmann::json::parse(tree_lines[d]);
    std::vector<RegressionTree> trees;
    for (const auto& jt : line.at("trees")) trees.push_back(tree_from_json(jt.dump()));
    std::vector<double> fit(x_new.n, 0.0);
    for (const auto& t : trees) {
      for (int i = 0; i < x_new.n; ++i) fit[i] += evaluate(t, x_new, i);
    }
    for (double& v : fit) v = probit ? normal_cdf(v) : scaling.invert(v);
    out.per_draw[d] = std::move(fit);
  }

  out.mean.assign(x_new.n, 0.0);
  for (int d = 0; d < n_draws; ++d) {
    for (int i = 0; i < x_new.n; ++i) out.mean[i] += out.per_draw[d][i];
  }
  for (double& v : out.mean) v /= n_draws;
  return out;
}

}  // namespace netbart
