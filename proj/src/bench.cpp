#include "netbart/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "netbart/csv.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netbart {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kNetRows = 5;
constexpr int kNetCols = 10;
}  // namespace

DgpId parse_dgp(const std::string& name) {
  if (name == "dgp1") return DgpId::Dgp1;
  if (name == "dgp2") return DgpId::Dgp2;
  if (name == "dgp3") return DgpId::Dgp3;
  if (name == "dgp4") return DgpId::Dgp4;
  if (name == "net_constant") return DgpId::NetConstant;
  if (name == "net_smooth") return DgpId::NetSmooth;
  throw std::runtime_error("unknown DGP '" + name + "'");
}

std::string dgp_name(DgpId id) {
  switch (id) {
    case DgpId::Dgp1: return "dgp1";
    case DgpId::Dgp2: return "dgp2";
    case DgpId::Dgp3: return "dgp3";
    case DgpId::Dgp4: return "dgp4";
    case DgpId::NetConstant: return "net_constant";
    case DgpId::NetSmooth: return "net_smooth";
  }
  return "dgp1";
}

void DgpSpec::validate() const {
  if (n < 1) throw std::runtime_error("dgp: n must be >= 1");
  if (noise_sd < 0.0) throw std::runtime_error("dgp: noise_sd must be >= 0");
  if (!level_probs.empty()) {
    if (level_probs.size() != 10) throw std::runtime_error("dgp: level_probs must have 10 entries");
    double total = 0.0;
    for (double p : level_probs) {
      if (p < 0.0) throw std::runtime_error("dgp: negative level probability");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::runtime_error("dgp: level_probs must sum to 1");
  }
}

std::vector<double> balanced_level_probs() { return std::vector<double>(10, 0.1); }

std::vector<double> imbalanced_level_probs() {
  return {0.01, 0.1, 0.02, 0.2, 0.15, 0.03, 0.05, 0.15, 0.25, 0.04};
}

std::array<double, 4> eval_basis(const std::vector<double>& x) {
  const double f0 = 10.0 * std::sin(kPi * x[0] * x[1]);
  const double f1 = 10.0 * (x[2] - 0.5) * (x[2] - 0.5);
  const double f2 = f1 + 10.0 * x[3] + 5.0 * x[4];
  const double ind2 = x[1] > 0.5 ? 1.0 : 0.0;
  const double f3 = 6.0 * x[0] + (4.0 - 10.0 * ind2) * std::sin(kPi * x[0]) - 4.0 * ind2 + 15.0;
  return {f0, f1, f2, f3};
}

double eval_mu(int d, const std::vector<double>& x, int level) {
  if (level < 0 || level > 9) throw std::runtime_error("eval_mu: level out of range");
  auto [f0, f1, f2, f3] = eval_basis(x);
  auto level_in = [&](std::initializer_list<int> set) {
    return std::find(set.begin(), set.end(), level) != set.end();
  };
  switch (d) {
    case 1:
      return level_in({0, 2, 4, 8}) ? f3 : f0 + f1 + f2 - 0.75;
    case 2:
      return level == 0 ? f0 + f1 + f2 - 0.75 : f2;
    case 3:
      return f0 * (level_in({0, 3, 4, 6}) ? 1.0 : 0.0) +
             f1 * (level_in({1, 3, 4, 5, 6}) ? 1.0 : 0.0) +
             f2 * (level_in({2, 3, 5, 6}) ? 1.0 : 0.0) + f3 * (level_in({7, 8, 9}) ? 1.0 : 0.0);
    case 4:
      return (level + 1) / 10.0 * (f1 + f2 + f3 - 0.75) + (9 - level) / 10.0 * f3;
    default:
      throw std::runtime_error("eval_mu: d must be 1..4");
  }
}

double eval_network_fn(const std::vector<double>& x, double w_v) {
  const double ind2 = x[1] > 0.5 ? 1.0 : 0.0;
  const double g0 = 3.0 * x[0] + (2.0 - 5.0 * ind2) * std::sin(kPi * x[0]) - 2.0 * ind2;
  const double g1 = 3.0 - 3.0 * std::cos(6.0 * kPi * x[0]) * x[0] * x[0] * (x[0] > 0.6 ? 1.0 : 0.0) -
                    10.0 * std::sqrt(x[0]) * (x[0] < 0.25 ? 1.0 : 0.0);
  return w_v * g0 + (1.0 - w_v) * g1;
}

std::vector<double> grid_vertex_weights(int rows, int cols) {
  std::vector<double> w(static_cast<std::size_t>(rows) * cols);
  const double denom = std::max(1, (rows - 1) + (cols - 1));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) w[r * cols + c] = (r + c) / denom;
  }
  return w;
}

std::vector<double> grid_vertex_values(int rows, int cols) {
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int q = (r >= (rows + 1) / 2 ? 2 : 0) + (c >= (cols + 1) / 2 ? 1 : 0);
      v[r * cols + c] = -3.0 + 2.0 * q;
    }
  }
  return v;
}

Network default_dgp_network() { return grid_network(kNetRows, kNetCols); }

namespace {

PredictorSchema categorical_dgp_schema() {
  PredictorSchema schema;
  for (int j = 1; j <= 10; ++j) {
    ColumnSpec col;
    col.name = "x" + std::to_string(j);
    schema.columns.push_back(col);
  }
  ColumnSpec cat;
  cat.name = "x11";
  cat.kind = ColumnKind::Categorical;
  for (int l = 0; l < 10; ++l) cat.levels.push_back("c" + std::to_string(l));
  schema.columns.push_back(cat);
  return schema;
}

PredictorSchema network_dgp_schema(const Network& net) {
  PredictorSchema schema;
  for (int j = 1; j <= 2; ++j) {
    ColumnSpec col;
    col.name = "x" + std::to_string(j);
    schema.columns.push_back(col);
  }
  ColumnSpec vert;
  vert.name = "v";
  vert.kind = ColumnKind::Network;
  vert.levels = net.vertices;
  vert.network = "g";
  schema.columns.push_back(vert);
  return schema;
}

int draw_level(const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t l = 0; l < probs.size(); ++l) {
    acc += probs[l];
    if (u < acc) return static_cast<int>(l);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

Dataset generate(const DgpSpec& spec, const Network* net) {
  spec.validate();
  Rng rng(spec.seed);
  Dataset ds;

  const bool is_net = spec.id == DgpId::NetConstant || spec.id == DgpId::NetSmooth;
  if (!is_net) {
    ds.schema = categorical_dgp_schema();
    ds.n = spec.n;
    ds.x_cont.assign(10, std::vector<double>(ds.n));
    ds.x_cat.assign(1, std::vector<int>(ds.n));
    ds.y.resize(ds.n);
    ds.has_outcome = true;
    ds.cont_ranges.assign(10, {0.0, 1.0, false});
    ds.scaled_cutpoints.resize(10);
    const std::vector<double> probs =
        spec.level_probs.empty() ? balanced_level_probs() : spec.level_probs;
    const int d = spec.id == DgpId::Dgp1   ? 1
                  : spec.id == DgpId::Dgp2 ? 2
                  : spec.id == DgpId::Dgp3 ? 3
                                           : 4;
    std::vector<double> x(10);
    for (int i = 0; i < ds.n; ++i) {
      for (int j = 0; j < 10; ++j) {
        x[j] = rng.uniform();
        ds.x_cont[j][i] = x[j];
      }
      int level = draw_level(probs, rng);
      ds.x_cat[0][i] = level;
      ds.y[i] = eval_mu(d, x, level) + spec.noise_sd * rng.normal();
    }
    ds.validate();
    return ds;
  }

  Network local;
  if (net == nullptr) {
    local = default_dgp_network();
    net = &local;
  }
  const int n_vertices = net->size();
  const int per_vertex = std::max(1, (spec.n + n_vertices / 2) / n_vertices);
  ds.schema = network_dgp_schema(*net);
  ds.n = per_vertex * n_vertices;
  ds.x_cont.assign(2, std::vector<double>(ds.n));
  ds.x_cat.assign(1, std::vector<int>(ds.n));
  ds.y.resize(ds.n);
  ds.has_outcome = true;
  ds.cont_ranges.assign(2, {0.0, 1.0, false});
  ds.scaled_cutpoints.resize(2);

  // Weight/value maps assume the default grid layout when a custom net of
  // a different size is supplied; we ramp over the vertex index then.
  std::vector<double> w;
  if (n_vertices == kNetRows * kNetCols) {
    w = spec.id == DgpId::NetSmooth ? grid_vertex_weights(kNetRows, kNetCols)
                                    : grid_vertex_values(kNetRows, kNetCols);
  } else {
    w.resize(n_vertices);
    for (int v = 0; v < n_vertices; ++v) {
      double t = n_vertices > 1 ? static_cast<double>(v) / (n_vertices - 1) : 0.0;
      w[v] = spec.id == DgpId::NetSmooth ? t : -3.0 + 6.0 * t;
    }
  }

  std::vector<double> x(2);
  int row = 0;
  for (int v = 0; v < n_vertices; ++v) {
    for (int k = 0; k < per_vertex; ++k, ++row) {
      x[0] = rng.uniform();
      x[1] = rng.uniform();
      ds.x_cont[0][row] = x[0];
      ds.x_cont[1][row] = x[1];
      ds.x_cat[0][row] = v;
      double f = spec.id == DgpId::NetSmooth ? eval_network_fn(x, w[v]) : w[v];
      ds.y[row] = f + spec.noise_sd * rng.normal();
    }
  }
  ds.validate();
  return ds;
}

MetricsReport regression_metrics(const std::vector<double>& y_true,
                                 const std::vector<double>& y_pred, double train_mean) {
  if (y_true.empty() || y_true.size() != y_pred.size()) {
    throw std::runtime_error("metrics: shape mismatch or empty inputs");
  }
  double sse = 0.0, sse_base = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    sse += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    sse_base += (y_true[i] - train_mean) * (y_true[i] - train_mean);
  }
  MetricsReport rep;
  rep.rmse = std::sqrt(sse / y_true.size());
  rep.smse = sse_base > 0.0 ? sse / sse_base : 0.0;
  return rep;
}

MetricsReport classification_metrics(const std::vector<int>& y_true,
                                     const std::vector<double>& p_pred) {
  if (y_true.empty() || y_true.size() != p_pred.size()) {
    throw std::runtime_error("metrics: shape mismatch or empty inputs");
  }
  double miss = 0.0, ll = 0.0, brier = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    double p = std::clamp(p_pred[i], 1e-12, 1.0 - 1e-12);
    int pred = p_pred[i] > 0.5 ? 1 : 0;
    if (pred != y_true[i]) miss += 1.0;
    ll -= y_true[i] == 1 ? std::log(p) : std::log1p(-p);
    brier += (p_pred[i] - y_true[i]) * (p_pred[i] - y_true[i]);
  }
  MetricsReport rep;
  rep.misclassification = miss / y_true.size();
  rep.log_loss = ll / y_true.size();
  rep.brier = brier / y_true.size();
  return rep;
}

std::vector<std::vector<int>> oracle_blocks(DgpId id) {
  switch (id) {
    case DgpId::Dgp1: return {{0, 2, 4, 8}, {1, 3, 5, 6, 7, 9}};
    case DgpId::Dgp2: return {{0}, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    case DgpId::Dgp3: return {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7, 8, 9}};
    case DgpId::Dgp4: return {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}};
    default: throw std::runtime_error("oracle_blocks: no true partition for this DGP");
  }
}

namespace {

ChainConfig make_chain(const BenchSamplerConfig& cfg, std::uint64_t seed) {
  ChainConfig chain;
  chain.n_iterations = cfg.n_iterations;
  chain.n_burnin = cfg.n_burnin;
  chain.thin = cfg.thin;
  chain.seed = seed;
  return chain;
}

PriorConfig make_prior(const BenchSamplerConfig& cfg) {
  PriorConfig prior;
  prior.n_trees = cfg.n_trees;
  return prior;
}

std::vector<double> posterior_mean_test_fit(const PosteriorSamples& samples) {
  if (samples.test_fit.empty()) throw std::runtime_error("bench: no test fits recorded");
  std::vector<double> mean(samples.test_fit.front().size(), 0.0);
  for (const auto& draw : samples.test_fit) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += draw[i];
  }
  for (double& v : mean) v /= samples.test_fit.size();
  return mean;
}

}  // namespace

std::vector<double> run_oracle(DgpId id, const Dataset& train, const Dataset& test,
                               const BenchSamplerConfig& cfg, std::uint64_t seed) {
  auto blocks = oracle_blocks(id);
  std::vector<double> preds(test.n, 0.0);
  const NetworkMap no_networks;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<int> train_rows, test_rows;
    auto in_block = [&](int level) {
      return std::find(blocks[b].begin(), blocks[b].end(), level) != blocks[b].end();
    };
    for (int i = 0; i < train.n; ++i) {
      if (in_block(train.x_cat[0][i])) train_rows.push_back(i);
    }
    for (int i = 0; i < test.n; ++i) {
      if (in_block(test.x_cat[0][i])) test_rows.push_back(i);
    }
    if (test_rows.empty()) continue;

    // Fallback to a global fit when the block has no training rows.
    Dataset sub_train = train_rows.empty() ? train : subset_rows(train, train_rows);
    Dataset sub_test = subset_rows(test, test_rows);
    PosteriorSamples samples =
        run_chain(sub_train, make_chain(cfg, derive_seed(seed, b)), make_prior(cfg), no_networks,
                  &sub_test);
    std::vector<double> mean = posterior_mean_test_fit(samples);
    for (std::size_t k = 0; k < test_rows.size(); ++k) preds[test_rows[k]] = mean[k];
  }
  return preds;
}

namespace {

// Replaces the vertex column with the d-dimensional adjacency spectral
// embedding of the network, rescaled by the training rows' ranges.
std::pair<Dataset, Dataset> ase_datasets(const Dataset& train, const Dataset& test,
                                         const Network& net, int d) {
  Eigen::MatrixXd emb = adjacency_spectral_embedding(net, d);
  auto build_schema = [&](const Dataset& src) {
    PredictorSchema schema;
    for (int c : src.schema.continuous_cols()) schema.columns.push_back(src.schema.columns[c]);
    for (int k = 0; k < d; ++k) {
      ColumnSpec col;
      col.name = "ase" + std::to_string(k + 1);
      schema.columns.push_back(col);
    }
    return schema;
  };

  std::vector<ContinuousRange> ranges(d);
  for (int k = 0; k < d; ++k) {
    double lo = emb.col(k).minCoeff(), hi = emb.col(k).maxCoeff();
    ranges[k] = {lo, hi, !(hi > lo)};
  }

  auto convert = [&](const Dataset& src) {
    Dataset out;
    out.schema = build_schema(src);
    out.n = src.n;
    out.y = src.y;
    out.has_outcome = src.has_outcome;
    out.x_cont = src.x_cont;
    out.cont_ranges = src.cont_ranges;
    out.scaled_cutpoints = src.scaled_cutpoints;
    for (int k = 0; k < d; ++k) {
      std::vector<double> col(src.n);
      for (int i = 0; i < src.n; ++i) col[i] = ranges[k].rescale(emb(src.x_cat[0][i], k));
      out.x_cont.push_back(std::move(col));
      out.cont_ranges.push_back(ranges[k]);
      out.scaled_cutpoints.emplace_back();
    }
    out.validate();
    return out;
  };
  return {convert(train), convert(test)};
}

std::vector<double> method_predictions(const std::string& method, DgpId dgp, const Dataset& train,
                                       const Dataset& test, const Network* net,
                                       const BenchSamplerConfig& cfg, std::uint64_t seed) {
  NetworkMap networks;
  if (net != nullptr) networks["g"] = *net;

  if (method == "oracle") return run_oracle(dgp, train, test, cfg, seed);
  if (method == "onehot") {
    Dataset oh_train = one_hot_encode(train);
    Dataset oh_test = one_hot_encode(test);
    PosteriorSamples s = run_chain(oh_train, make_chain(cfg, seed), make_prior(cfg), {}, &oh_test);
    return posterior_mean_test_fit(s);
  }
  if (method == "target") {
    Dataset tr = target_encode(train, train);
    Dataset te = target_encode(train, test);
    PosteriorSamples s = run_chain(tr, make_chain(cfg, seed), make_prior(cfg), {}, &te);
    return posterior_mean_test_fit(s);
  }
  if (method.rfind("ase", 0) == 0) {
    if (net == nullptr) throw std::runtime_error("bench: method '" + method + "' needs a network");
    int d = std::stoi(method.substr(3));
    auto [tr, te] = ase_datasets(train, test, *net, d);
    PosteriorSamples s = run_chain(tr, make_chain(cfg, seed), make_prior(cfg), {}, &te);
    return posterior_mean_test_fit(s);
  }

  PriorConfig prior = make_prior(cfg);
  if (method == "flex_unif" || method == "unif") {
    // Network structure ignored: every categorical column splits uniformly.
  } else if (method == "gs1" || method == "gs2" || method == "gs3" || method == "gs4") {
    if (net == nullptr) throw std::runtime_error("bench: method '" + method + "' needs a network");
    auto cat_cols = train.schema.categorical_cols();
    for (int ci : cat_cols) {
      if (train.schema.columns[ci].kind == ColumnKind::Network) {
        prior.strategies[train.schema.columns[ci].name] = parse_strategy(method);
      }
    }
  } else {
    throw std::runtime_error("bench: unknown method '" + method + "'");
  }
  PosteriorSamples s = run_chain(train, make_chain(cfg, seed), prior, networks, &test);
  return posterior_mean_test_fit(s);
}

struct RepOutcome {
  std::map<std::string, MetricsReport> metrics;
  std::map<std::string, double> mse;
};

}  // namespace

ComparisonResult run_comparison(const DgpSpec& spec, const std::vector<std::string>& methods,
                                int reps, const BenchSamplerConfig& cfg,
                                const std::string& out_dir) {
  spec.validate();
  if (reps < 1) throw std::runtime_error("run_comparison: reps must be >= 1");
  if (methods.empty()) throw std::runtime_error("run_comparison: no methods given");

  const bool is_net = spec.id == DgpId::NetConstant || spec.id == DgpId::NetSmooth;
  for (const auto& m : methods) {
    bool net_method = m == "gs1" || m == "gs2" || m == "gs3" || m == "gs4" || m.rfind("ase", 0) == 0;
    if (net_method && !is_net) {
      throw std::runtime_error("run_comparison: method '" + m + "' requires a network DGP");
    }
    if (m == "oracle" && is_net) {
      throw std::runtime_error("run_comparison: oracle is defined for dgp1..dgp4 only");
    }
  }

  Network net;
  if (is_net) net = default_dgp_network();

  std::vector<RepOutcome> outcomes(reps);

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) {
    const std::uint64_t rep_seed = derive_seed(spec.seed, 7000 + rep);

    DgpSpec train_spec = spec;
    train_spec.seed = derive_seed(rep_seed, 1);
    DgpSpec test_spec = spec;
    test_spec.noise_sd = 0.0;  // targets are function values, not noisy draws
    test_spec.seed = derive_seed(rep_seed, 2);

    Dataset train, test;
    if (!is_net) {
      train = generate(train_spec);
      test_spec.n = 500;
      test = generate(test_spec);
    } else {
      // Hold out 10% of the vertices; train sees the rest, test evaluates
      // fresh draws at the held-out vertices (network kept intact).
      Dataset full_train = generate(train_spec, &net);
      Dataset full_test = generate(test_spec, &net);
      const int n_holdout = std::max(1, net.size() / 10);
      std::vector<int> verts(net.size());
      std::iota(verts.begin(), verts.end(), 0);
      Rng hold_rng(derive_seed(rep_seed, 3));
      for (int i = net.size() - 1; i > 0; --i) {
        std::swap(verts[i], verts[hold_rng.uniform_int(i + 1)]);
      }
      std::vector<char> held(net.size(), 0);
      for (int k = 0; k < n_holdout; ++k) held[verts[k]] = 1;
      std::vector<int> train_rows, test_rows;
      for (int i = 0; i < full_train.n; ++i) {
        if (!held[full_train.x_cat[0][i]]) train_rows.push_back(i);
      }
      for (int i = 0; i < full_test.n; ++i) {
        if (held[full_test.x_cat[0][i]]) test_rows.push_back(i);
      }
      train = subset_rows(full_train, train_rows);
      test = subset_rows(full_test, test_rows);
    }

    const double train_mean =
        std::accumulate(train.y.begin(), train.y.end(), 0.0) / train.n;

    RepOutcome& out = outcomes[rep];
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      std::uint64_t fit_seed = derive_seed(rep_seed, 100 + mi);
      std::vector<double> preds =
          method_predictions(methods[mi], spec.id, train, test, is_net ? &net : nullptr, cfg,
                             fit_seed);
      MetricsReport rep_metrics = regression_metrics(test.y, preds, train_mean);
      double sse = 0.0;
      for (int i = 0; i < test.n; ++i) sse += (test.y[i] - preds[i]) * (test.y[i] - preds[i]);
      out.mse[methods[mi]] = sse / test.n;
      out.metrics[methods[mi]] = rep_metrics;
    }
  }

  ComparisonResult result;
  result.methods = methods;
  result.folds = reps;
  const bool have_onehot = std::find(methods.begin(), methods.end(), "onehot") != methods.end();
  for (int rep = 0; rep < reps; ++rep) {
    for (const auto& m : methods) {
      const MetricsReport& mr = outcomes[rep].metrics.at(m);
      result.rows.push_back({m, rep, "mse", outcomes[rep].mse.at(m)});
      result.rows.push_back({m, rep, "rmse", *mr.rmse});
      result.rows.push_back({m, rep, "smse", *mr.smse});
      if (have_onehot) {
        result.rows.push_back(
            {m, rep, "mse_ratio_onehot", outcomes[rep].mse.at(m) / outcomes[rep].mse.at("onehot")});
      }
    }
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::vector<CsvRow> rows{{"method", "fold", "metric", "value"}};
    for (const auto& r : result.rows) {
      rows.push_back({r.method, std::to_string(r.fold), r.metric, format_double(r.value)});
    }
    write_csv_file(out_dir + "/metrics.csv", rows);

    nlohmann::json summary;
    for (const auto& m : methods) {
      std::map<std::string, std::vector<double>> by_metric;
      for (const auto& r : result.rows) {
        if (r.method == m) by_metric[r.metric].push_back(r.value);
      }
      nlohmann::json jm;
      for (const auto& [metric, values] : by_metric) {
        double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        jm[metric] = {{"mean", mean},
                      {"sd", values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0}};
      }
      if (have_onehot && m != "onehot") {
        int wins = 0;
        for (int rep = 0; rep < reps; ++rep) {
          if (outcomes[rep].mse.at(m) < outcomes[rep].mse.at("onehot")) ++wins;
        }
        jm["win_fraction_vs_onehot"] = static_cast<double>(wins) / reps;
      }
      summary[m] = jm;
    }
    std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";

    nlohmann::json manifest;
    manifest["dgp"] = dgp_name(spec.id);
    manifest["n"] = spec.n;
    manifest["noise_sd"] = spec.noise_sd;
    manifest["reps"] = reps;
    manifest["methods"] = methods;
    manifest["seed"] = spec.seed;
    manifest["trees"] = cfg.n_trees;
    manifest["iterations"] = cfg.n_iterations;
    manifest["burnin"] = cfg.n_burnin;
    manifest["thin"] = cfg.thin;
    if (!spec.level_probs.empty()) manifest["level_probs"] = spec.level_probs;
    std::ofstream(out_dir + "/manifest.json") << manifest.dump(2) << "\n";
  }
  return result;
}

}  // namespace netbart
