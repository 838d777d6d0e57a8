// Compares the OpenMP fan-out kernels against their serial reference
// implementations: prior co-clustering Monte Carlo and posterior
// prediction over retained draws. The parallel variants are reduced with
// integer counts (co-clustering) or slot-indexed writes (prediction), so
// both produce bit-identical output at any thread count; these benchmarks
// measure the throughput difference only.

#include <benchmark/benchmark.h>

#include <json.hpp>

#include "netbart/bench.hpp"
#include "netbart/sampler.hpp"

using namespace netbart;

namespace {

PredictorSpace coclust_space(const Network& g) {
  PredictorSpace space;
  space.cat.push_back({g.size(), &g, SplitStrategy::Gs2});
  return space;
}

const Network& bench_grid() {
  static Network g = grid_network(5, 10);
  return g;
}

void BM_coclust_serial(benchmark::State& state) {
  PriorConfig cfg;
  PredictorSpace space = coclust_space(bench_grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        co_clustering_matrix_serial(cfg, space, ColumnProbe::levels(0), state.range(0), 1));
  }
}

void BM_coclust_parallel(benchmark::State& state) {
  PriorConfig cfg;
  PredictorSpace space = coclust_space(bench_grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        co_clustering_matrix(cfg, space, ColumnProbe::levels(0), state.range(0), 1));
  }
}

struct PredictFixture {
  Dataset test;
  std::vector<std::string> lines;
  OutcomeScaling scaling;

  PredictFixture() {
    DgpSpec spec;
    spec.id = DgpId::Dgp1;
    spec.n = 400;
    spec.seed = 1;
    Dataset train = generate(spec);
    DgpSpec test_spec = spec;
    test_spec.n = 200;
    test_spec.seed = 2;
    test = generate(test_spec);

    ChainConfig chain;
    chain.n_iterations = 150;
    chain.n_burnin = 50;
    chain.seed = 3;
    chain.save_trees = true;
    PriorConfig prior;
    prior.n_trees = 50;
    PosteriorSamples samples = run_chain(train, chain, prior, {});
    lines = samples.tree_lines;
    scaling = samples.scaling;
  }
};

PredictFixture& predict_fixture() {
  static PredictFixture f;
  return f;
}

// Serial reference for prediction: same per-draw arithmetic, plain loop.
std::vector<double> predict_serial(const std::vector<std::string>& lines, const Dataset& x_new,
                                   const OutcomeScaling& scaling) {
  std::vector<double> mean(x_new.n, 0.0);
  for (const auto& line : lines) {
    auto parsed = nlohmann::json::parse(line);
    std::vector<double> fit(x_new.n, 0.0);
    for (const auto& jt : parsed.at("trees")) {
      RegressionTree t = tree_from_json(jt.dump());
      for (int i = 0; i < x_new.n; ++i) fit[i] += evaluate(t, x_new, i);
    }
    for (int i = 0; i < x_new.n; ++i) mean[i] += scaling.invert(fit[i]);
  }
  for (double& v : mean) v /= lines.size();
  return mean;
}

void BM_predict_serial(benchmark::State& state) {
  auto& f = predict_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_serial(f.lines, f.test, f.scaling));
  }
}

void BM_predict_parallel(benchmark::State& state) {
  auto& f = predict_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(f.lines, f.test, f.scaling, false));
  }
}

}  // namespace

BENCHMARK(BM_coclust_serial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coclust_parallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
