// netbart command-line tool: fit/predict for the tree-ensemble sampler,
// prior-partition analysis, co-clustering matrices, graph checks, and the
// synthetic benchmark driver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netbart/bench.hpp"
#include "netbart/csv.hpp"
#include "netbart/sampler.hpp"

using namespace netbart;
using nlohmann::json;

namespace {

struct FitOptions {
  std::string data_path;
  std::string schema_path;
  std::vector<std::string> network_args;  // "<id>=<path>"
  std::string out_dir;
  int iters = 2000;
  int burnin = 1000;
  int thin = 1;
  int trees = 200;
  std::string strategy = "unif";
  std::uint64_t seed = 0;
  bool probit = false;
  int min_leaf = 0;
  bool save_trees = false;
  double alpha = 0.95;
  double beta = 2.0;
  double tau = -1.0;  // <0: default (0.25 regression, 1.5 probit)
  double mu0 = 0.0;
  double nu = 3.0;
  double q_grow = 0.5;
};

NetworkMap load_networks(const std::vector<std::string>& args, const PredictorSchema& schema) {
  NetworkMap networks;
  for (const auto& arg : args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--network expects <id>=<path>, got '" + arg + "'");
    }
    std::string id = arg.substr(0, eq), path = arg.substr(eq + 1);
    const ColumnSpec* col = nullptr;
    for (const auto& c : schema.columns) {
      if (c.kind == ColumnKind::Network && c.network == id) col = &c;
    }
    if (col == nullptr) throw std::runtime_error("no schema column references network '" + id + "'");
    Network g = load_network(path, col->levels);
    if (!is_connected(g)) throw std::runtime_error("network '" + id + "' is not connected");
    networks[id] = std::move(g);
  }
  // Every network column must have its network supplied.
  for (const auto& c : schema.columns) {
    if (c.kind == ColumnKind::Network && !networks.count(c.network)) {
      throw std::runtime_error("column '" + c.name + "' needs --network " + c.network + "=<path>");
    }
  }
  return networks;
}

json networks_to_json(const NetworkMap& networks) {
  json out = json::object();
  for (const auto& [id, g] : networks) {
    json edges = json::array();
    for (auto [u, v] : g.edges) edges.push_back({g.vertices[u], g.vertices[v]});
    out[id] = {{"vertices", g.vertices}, {"edges", edges}};
  }
  return out;
}

int cmd_fit(const FitOptions& opt) {
  PredictorSchema schema = load_schema(opt.schema_path);
  Dataset data = load_dataset(opt.data_path, schema);
  if (!data.has_outcome) throw std::runtime_error("fit: data file has no 'y' column");
  NetworkMap networks = load_networks(opt.network_args, schema);

  PriorConfig prior;
  prior.n_trees = opt.trees;
  prior.alpha = opt.alpha;
  prior.beta = opt.beta;
  prior.mu0 = opt.mu0;
  prior.nu = opt.nu;
  prior.tau_total = opt.tau > 0.0 ? opt.tau : (opt.probit ? 1.5 : 0.25);
  SplitStrategy strategy = parse_strategy(opt.strategy);
  for (const auto& c : schema.columns) {
    if (c.kind == ColumnKind::Network) prior.strategies[c.name] = strategy;
  }

  ChainConfig chain;
  chain.n_iterations = opt.iters;
  chain.n_burnin = opt.burnin;
  chain.thin = opt.thin;
  chain.seed = opt.seed;
  chain.probit = opt.probit;
  chain.min_leaf_size = opt.min_leaf;
  chain.q_grow = opt.q_grow;
  chain.save_trees = opt.save_trees;
  chain.validate();
  prior.validate();

  PosteriorSamples samples = run_chain(data, chain, prior, networks);

  std::filesystem::create_directories(opt.out_dir);

  std::ofstream csv(opt.out_dir + "/samples.csv", std::ios::binary);
  csv << "draw,sigma";
  for (int i = 0; i < data.n; ++i) csv << ",fit_" << i;
  csv << "\n";
  for (int d = 0; d < samples.n_draws(); ++d) {
    csv << d << "," << format_double(samples.sigma[d]);
    for (int i = 0; i < data.n; ++i) csv << "," << format_double(samples.train_fit[d][i]);
    csv << "\n";
  }
  csv.close();

  if (opt.save_trees) {
    std::ofstream nd(opt.out_dir + "/trees.ndjson", std::ios::binary);
    for (const auto& line : samples.tree_lines) nd << line << "\n";
  }

  json manifest;
  manifest["command"] = "fit";
  manifest["data"] = opt.data_path;
  manifest["schema"] = json::parse(schema_to_json(schema));
  manifest["networks"] = networks_to_json(networks);
  manifest["iters"] = opt.iters;
  manifest["burnin"] = opt.burnin;
  manifest["thin"] = opt.thin;
  manifest["trees"] = opt.trees;
  manifest["strategy"] = opt.strategy;
  manifest["seed"] = opt.seed;
  manifest["probit"] = opt.probit;
  manifest["min_leaf"] = opt.min_leaf;
  manifest["save_trees"] = opt.save_trees;
  manifest["alpha"] = opt.alpha;
  manifest["beta"] = opt.beta;
  manifest["tau_total"] = prior.tau_total;
  manifest["mu0"] = opt.mu0;
  manifest["nu"] = opt.nu;
  manifest["q_grow"] = opt.q_grow;
  manifest["outcome_scaling"] = {{"center", samples.scaling.center},
                                 {"half_range", samples.scaling.half_range}};
  json ranges = json::array();
  for (const auto& r : data.cont_ranges) {
    ranges.push_back({{"lo", r.lo}, {"hi", r.hi}, {"degenerate", r.degenerate}});
  }
  manifest["continuous_ranges"] = ranges;
  std::ofstream(opt.out_dir + "/manifest.json", std::ios::binary) << manifest.dump(2) << "\n";

  std::cout << "wrote " << samples.n_draws() << " draws to " << opt.out_dir << "\n";
  return 0;
}

int cmd_predict(const std::string& model_dir, const std::string& data_path,
                const std::string& out_path, bool per_draw) {
  std::ifstream mf(model_dir + "/manifest.json");
  if (!mf) throw std::runtime_error("predict: cannot open " + model_dir + "/manifest.json");
  json manifest = json::parse(mf);
  PredictorSchema schema = parse_schema(manifest.at("schema").dump());

  std::vector<ContinuousRange> ranges;
  for (const auto& jr : manifest.at("continuous_ranges")) {
    ranges.push_back({jr.at("lo").get<double>(), jr.at("hi").get<double>(),
                      jr.at("degenerate").get<bool>()});
  }
  OutcomeScaling scaling{manifest.at("outcome_scaling").at("center").get<double>(),
                         manifest.at("outcome_scaling").at("half_range").get<double>()};
  const bool probit = manifest.at("probit").get<bool>();

  Dataset x_new = load_dataset_with_ranges(data_path, schema, ranges);

  std::ifstream nd(model_dir + "/trees.ndjson");
  if (!nd) {
    throw std::runtime_error("predict: " + model_dir +
                             "/trees.ndjson not found (fit with --save-trees)");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(nd, line)) {
    if (!line.empty()) lines.push_back(line);
  }

  PredictionResult pred = predict(lines, x_new, scaling, probit);

  std::ofstream out(out_path, std::ios::binary);
  out << "row,mean";
  if (per_draw) {
    for (std::size_t d = 0; d < pred.per_draw.size(); ++d) out << ",draw_" << d;
  }
  out << "\n";
  for (int i = 0; i < x_new.n; ++i) {
    out << i << "," << format_double(pred.mean[i]);
    if (per_draw) {
      for (std::size_t d = 0; d < pred.per_draw.size(); ++d) {
        out << "," << format_double(pred.per_draw[d][i]);
      }
    }
    out << "\n";
  }
  std::cout << "wrote predictions for " << x_new.n << " rows to " << out_path << "\n";
  return 0;
}

int cmd_graph_check(const std::string& path, const std::string& schema_path,
                    const std::string& column) {
  Network g;
  if (!schema_path.empty()) {
    PredictorSchema schema = load_schema(schema_path);
    const ColumnSpec* col = nullptr;
    for (const auto& c : schema.columns) {
      if (c.name == column) col = &c;
    }
    if (col == nullptr || !col->is_categorical()) {
      throw std::runtime_error("graph check: no categorical column '" + column + "' in schema");
    }
    g = load_network(path, col->levels);
  } else {
    g = load_network(path);
  }
  std::cout << "vertices: " << g.size() << "\n";
  std::cout << "edges: " << g.edges.size() << "\n";
  auto comps = connected_components(g);
  std::cout << "connected: " << (comps.size() == 1 ? "yes" : "no") << "\n";
  std::cout << "components: " << comps.size() << "\n";
  if (g.size() <= 400) {
    double count = spanning_tree_count(g);
    std::cout << "spanning_trees: " << format_double(count) << "\n";
  } else {
    std::cout << "spanning_trees: skipped (graph too large)\n";
  }
  return 0;
}

Network network_from_options(const std::string& network_path, int grid_rows, int grid_cols) {
  if (!network_path.empty()) {
    Network g = load_network(network_path);
    if (!is_connected(g)) throw std::runtime_error("network file is not connected");
    return g;
  }
  return grid_network(grid_rows, grid_cols);
}

int cmd_prior_partitions(const std::string& network_path, int grid_rows, int grid_cols,
                         const std::string& strategy, int draws, std::uint64_t seed,
                         double alpha, double beta, const std::string& out_path) {
  Network g = network_from_options(network_path, grid_rows, grid_cols);
  PriorConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  SplitStrategy strat = parse_strategy(strategy);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "draw,partition\n";
  Rng rng(seed);
  for (int d = 0; d < draws; ++d) {
    LevelPartition p = draw_prior_network_partition(cfg, g, strat, rng);
    std::string text;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      if (b) text += ";";
      for (std::size_t i = 0; i < p.blocks[b].size(); ++i) {
        if (i) text += " ";
        text += g.vertices[p.blocks[b][i]];
      }
    }
    out << d << "," << csv_escape(text) << "\n";
  }
  std::cout << "wrote " << draws << " partitions to " << out_path << "\n";
  return 0;
}

int cmd_coclust(const std::string& network_path, int grid_rows, int grid_cols, int levels,
                const std::string& strategy, bool onehot, int draws, std::uint64_t seed,
                const std::string& out_path) {
  PriorConfig cfg;
  PredictorSpace space;
  std::vector<std::string> labels;
  Network g;
  ColumnProbe probe = ColumnProbe::levels(0);
  int k = 0;

  if (levels > 0) {
    k = levels;
    for (int l = 0; l < k; ++l) labels.push_back("c" + std::to_string(l));
    if (onehot) {
      space.cont.assign(k, {false, nullptr});
      probe = ColumnProbe::onehot(0, k);
    } else {
      space.cat.push_back({k, nullptr, SplitStrategy::Unif});
    }
  } else {
    g = network_from_options(network_path, grid_rows, grid_cols);
    k = g.size();
    labels = g.vertices;
    if (onehot) {
      space.cont.assign(k, {false, nullptr});
      probe = ColumnProbe::onehot(0, k);
    } else {
      space.cat.push_back({k, &g, parse_strategy(strategy)});
    }
  }

  Eigen::MatrixXd m = co_clustering_matrix(cfg, space, probe, draws, seed);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "level";
  for (const auto& l : labels) out << "," << csv_escape(l);
  out << "\n";
  for (int a = 0; a < k; ++a) {
    out << csv_escape(labels[a]);
    for (int b = 0; b < k; ++b) out << "," << format_double(m(a, b));
    out << "\n";
  }
  std::cout << "wrote " << k << "x" << k << " co-clustering matrix to " << out_path << "\n";
  return 0;
}

int cmd_bench(const std::string& dgp, int n, int reps, const std::string& methods_arg,
              std::uint64_t seed, const std::string& out_dir, const BenchSamplerConfig& cfg,
              bool imbalanced, double noise_sd) {
  DgpSpec spec;
  spec.id = parse_dgp(dgp);
  spec.n = n;
  spec.seed = seed;
  spec.noise_sd = noise_sd;
  if (imbalanced) spec.level_probs = imbalanced_level_probs();

  std::vector<std::string> methods;
  std::stringstream ss(methods_arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) methods.push_back(item);
  }

  ComparisonResult res = run_comparison(spec, methods, reps, cfg, out_dir);
  std::cout << "wrote " << res.rows.size() << " metric rows to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian additive regression trees with subset categorical splits and "
               "network-structured predictors"};
  app.require_subcommand(1);

  // fit
  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "run the backfitting sampler on a dataset");
  fit_cmd->add_option("--data", fit.data_path, "training CSV (with a y column)")->required();
  fit_cmd->add_option("--schema", fit.schema_path, "predictor schema JSON")->required();
  fit_cmd->add_option("--network", fit.network_args, "network edge list as <id>=<path>");
  fit_cmd->add_option("--iters", fit.iters, "total Gibbs iterations");
  fit_cmd->add_option("--burnin", fit.burnin, "burn-in iterations");
  fit_cmd->add_option("--thin", fit.thin, "thinning interval");
  fit_cmd->add_option("--trees", fit.trees, "ensemble size M");
  fit_cmd->add_option("--strategy", fit.strategy, "network split strategy")
      ->check(CLI::IsMember({"unif", "gs1", "gs2", "gs3", "gs4"}));
  fit_cmd->add_option("--seed", fit.seed, "random seed");
  fit_cmd->add_flag("--probit", fit.probit, "binary outcome via the probit link");
  fit_cmd->add_option("--min-leaf", fit.min_leaf, "reject proposals with smaller leaves");
  fit_cmd->add_flag("--save-trees", fit.save_trees, "write trees.ndjson for later prediction");
  fit_cmd->add_option("--alpha", fit.alpha, "branching prior alpha");
  fit_cmd->add_option("--beta", fit.beta, "branching prior beta");
  fit_cmd->add_option("--tau", fit.tau, "prior sd of f(x)");
  fit_cmd->add_option("--mu0", fit.mu0, "prior mean of f(x)");
  fit_cmd->add_option("--nu", fit.nu, "sigma prior degrees of freedom");
  fit_cmd->add_option("--q-grow", fit.q_grow, "grow proposal probability");
  fit_cmd->add_option("--out", fit.out_dir, "output directory")->required();

  // predict
  std::string model_dir, pred_data, pred_out;
  bool pred_per_draw = false;
  CLI::App* pred_cmd = app.add_subcommand("predict", "predict from a saved fit");
  pred_cmd->add_option("--model", model_dir, "fit output directory")->required();
  pred_cmd->add_option("--data", pred_data, "CSV of new predictor rows")->required();
  pred_cmd->add_option("--out", pred_out, "output CSV")->required();
  pred_cmd->add_flag("--per-draw", pred_per_draw, "include one column per posterior draw");

  // graph check
  std::string graph_file, graph_schema, graph_column;
  CLI::App* graph_cmd = app.add_subcommand("graph", "graph utilities");
  CLI::App* check_cmd = graph_cmd->add_subcommand("check", "report counts and connectivity");
  check_cmd->add_option("file", graph_file, "edge list file")->required();
  check_cmd->add_option("--schema", graph_schema, "take the vertex universe from this schema");
  check_cmd->add_option("--column", graph_column, "schema column naming the universe");

  // prior-partitions
  std::string pp_network, pp_strategy = "gs2", pp_out;
  int pp_rows = 5, pp_cols = 10, pp_draws = 1000;
  std::uint64_t pp_seed = 0;
  double pp_alpha = 0.95, pp_beta = 2.0;
  CLI::App* pp_cmd = app.add_subcommand("prior-partitions", "sample partitions from the prior");
  pp_cmd->add_option("--network", pp_network, "edge list file (default: grid)");
  pp_cmd->add_option("--grid-rows", pp_rows, "grid rows when no file is given");
  pp_cmd->add_option("--grid-cols", pp_cols, "grid cols when no file is given");
  pp_cmd->add_option("--strategy", pp_strategy, "unif or gs1..gs4")
      ->check(CLI::IsMember({"unif", "gs1", "gs2", "gs3", "gs4"}));
  pp_cmd->add_option("--draws", pp_draws, "number of prior draws");
  pp_cmd->add_option("--seed", pp_seed, "random seed");
  pp_cmd->add_option("--alpha", pp_alpha, "branching prior alpha");
  pp_cmd->add_option("--beta", pp_beta, "branching prior beta");
  pp_cmd->add_option("--out", pp_out, "output CSV")->required();

  // coclust
  std::string cc_network, cc_strategy = "unif", cc_out;
  int cc_rows = 5, cc_cols = 10, cc_levels = 0, cc_draws = 10000;
  std::uint64_t cc_seed = 0;
  bool cc_onehot = false;
  CLI::App* cc_cmd = app.add_subcommand("coclust", "prior co-clustering probability matrix");
  cc_cmd->add_option("--network", cc_network, "edge list file");
  cc_cmd->add_option("--grid-rows", cc_rows, "grid rows when no file is given");
  cc_cmd->add_option("--grid-cols", cc_cols, "grid cols when no file is given");
  cc_cmd->add_option("--levels", cc_levels, "unstructured column with this many levels");
  cc_cmd->add_option("--strategy", cc_strategy, "unif or gs1..gs4")
      ->check(CLI::IsMember({"unif", "gs1", "gs2", "gs3", "gs4"}));
  cc_cmd->add_flag("--onehot", cc_onehot, "analyze the one-hot encoded representation");
  cc_cmd->add_option("--draws", cc_draws, "Monte Carlo draws");
  cc_cmd->add_option("--seed", cc_seed, "random seed");
  cc_cmd->add_option("--out", cc_out, "output CSV")->required();

  // bench
  std::string bench_dgp = "dgp1", bench_methods = "flex_unif,onehot", bench_out;
  int bench_n = 1000, bench_reps = 10;
  std::uint64_t bench_seed = 0;
  bool bench_imbalanced = false;
  double bench_noise = 1.0;
  BenchSamplerConfig bench_cfg;
  CLI::App* bench_cmd = app.add_subcommand("bench", "synthetic benchmark driver");
  bench_cmd->add_option("--dgp", bench_dgp, "dgp1..dgp4, net_constant, net_smooth");
  bench_cmd->add_option("--n", bench_n, "training rows");
  bench_cmd->add_option("--reps", bench_reps, "replications");
  bench_cmd->add_option("--methods", bench_methods, "comma-separated method list");
  bench_cmd->add_option("--seed", bench_seed, "master seed");
  bench_cmd->add_option("--trees", bench_cfg.n_trees, "ensemble size M");
  bench_cmd->add_option("--iters", bench_cfg.n_iterations, "Gibbs iterations");
  bench_cmd->add_option("--burnin", bench_cfg.n_burnin, "burn-in iterations");
  bench_cmd->add_option("--thin", bench_cfg.thin, "thinning interval");
  bench_cmd->add_flag("--imbalanced", bench_imbalanced, "imbalanced level probabilities");
  bench_cmd->add_option("--noise", bench_noise, "training noise sd");
  bench_cmd->add_option("--out", bench_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*pred_cmd) return cmd_predict(model_dir, pred_data, pred_out, pred_per_draw);
    if (*graph_cmd) {
      if (!*check_cmd) throw std::runtime_error("graph: expected the 'check' subcommand");
      return cmd_graph_check(graph_file, graph_schema, graph_column);
    }
    if (*pp_cmd) {
      return cmd_prior_partitions(pp_network, pp_rows, pp_cols, pp_strategy, pp_draws, pp_seed,
                                  pp_alpha, pp_beta, pp_out);
    }
    if (*cc_cmd) {
      return cmd_coclust(cc_network, cc_rows, cc_cols, cc_levels, cc_strategy, cc_onehot,
                         cc_draws, cc_seed, cc_out);
    }
    if (*bench_cmd) {
      return cmd_bench(bench_dgp, bench_n, bench_reps, bench_methods, bench_seed, bench_out,
                       bench_cfg, bench_imbalanced, bench_noise);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
