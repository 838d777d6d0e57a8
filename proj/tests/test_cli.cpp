#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netbart/csv.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* path = std::getenv("NETBART_CLI");
  REQUIRE(path != nullptr);
  return path;
}

int run(const std::string& args) {
  std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ostringstream ss;
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  ss << in.rdbuf();
  return ss.str();
}

fs::path sandbox() {
  fs::path dir = fs::temp_directory_path() / "netbart_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_fixture_files(const fs::path& dir) {
  std::ofstream(dir / "schema.json") << R"({"columns":[
    {"name":"x1","kind":"continuous"},
    {"name":"v","kind":"network","levels":["a","b","c","d"],"network":"g"}
  ]})";
  std::ofstream(dir / "net.txt") << "a b\nb c\nc d\nd a\n";
  std::ofstream data(dir / "train.csv");
  data << "x1,v,y\n";
  for (int i = 0; i < 40; ++i) {
    double x = (i % 10) / 10.0;
    const char* vs[] = {"a", "b", "c", "d"};
    const char* v = vs[i % 4];
    double y = x * 2.0 + (i % 4 < 2 ? 1.0 : -1.0) + 0.01 * (i % 7);
    data << x << "," << v << "," << y << "\n";
  }
}

}  // namespace

TEST_CASE("fit writes samples, manifest and trees; reruns are byte-identical") {
  fs::path dir = sandbox();
  write_fixture_files(dir);
  fs::path out1 = dir / "fit1", out2 = dir / "fit2";

  std::string fit_args = "fit --data " + (dir / "train.csv").string() + " --schema " +
                         (dir / "schema.json").string() + " --network g=" +
                         (dir / "net.txt").string() +
                         " --iters 40 --burnin 20 --trees 8 --strategy gs2 --seed 7 --save-trees";
  REQUIRE(run(fit_args + " --out " + out1.string()) == 0);
  REQUIRE(run(fit_args + " --out " + out2.string()) == 0);

  CHECK(fs::exists(out1 / "samples.csv"));
  CHECK(fs::exists(out1 / "trees.ndjson"));
  CHECK(fs::exists(out1 / "manifest.json"));
  CHECK(slurp(out1 / "samples.csv") == slurp(out2 / "samples.csv"));
  CHECK(slurp(out1 / "trees.ndjson") == slurp(out2 / "trees.ndjson"));
  CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));

  auto rows = netbart::read_csv_file((out1 / "samples.csv").string());
  REQUIRE(rows.size() == 21);  // header + 20 draws
  CHECK(rows[0][0] == "draw");
  CHECK(rows[0][1] == "sigma");
  CHECK(rows[0].size() == 2 + 40);
}

TEST_CASE("predict consumes a saved fit, handles unseen levels, is deterministic") {
  fs::path dir = sandbox();
  write_fixture_files(dir);
  fs::path out = dir / "fit_for_predict";
  std::string fit_args = "fit --data " + (dir / "train.csv").string() + " --schema " +
                         (dir / "schema.json").string() + " --network g=" +
                         (dir / "net.txt").string() +
                         " --iters 30 --burnin 15 --trees 5 --seed 3 --save-trees --out " +
                         out.string();
  REQUIRE(run(fit_args) == 0);

  // Row with x1 outside the training range and a vertex level; also a
  // level unseen anywhere in training would still be in the universe.
  std::ofstream(dir / "new.csv") << "x1,v\n-1.0,a\n0.35,d\n2.0,c\n";
  fs::path pred1 = dir / "pred1.csv", pred2 = dir / "pred2.csv";
  REQUIRE(run("predict --model " + out.string() + " --data " + (dir / "new.csv").string() +
              " --out " + pred1.string()) == 0);
  REQUIRE(run("predict --model " + out.string() + " --data " + (dir / "new.csv").string() +
              " --out " + pred2.string()) == 0);
  CHECK(slurp(pred1) == slurp(pred2));
  auto rows = netbart::read_csv_file(pred1.string());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == netbart::CsvRow{"row", "mean"});
}

TEST_CASE("graph check reports counts, connectivity and tree count") {
  fs::path dir = sandbox();
  write_fixture_files(dir);
  fs::path report = dir / "graph_report.txt";
  std::string cmd = cli() + " graph check " + (dir / "net.txt").string() + " > " +
                    report.string() + " 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::string text = slurp(report);
  CHECK(text.find("vertices: 4") != std::string::npos);
  CHECK(text.find("edges: 4") != std::string::npos);
  CHECK(text.find("connected: yes") != std::string::npos);
  CHECK(text.find("spanning_trees: 4") != std::string::npos);
}

TEST_CASE("prior-partitions emits one row per draw and is seed-deterministic") {
  fs::path dir = sandbox();
  fs::path out1 = dir / "pp1.csv", out2 = dir / "pp2.csv";
  REQUIRE(run("prior-partitions --grid-rows 3 --grid-cols 3 --strategy gs3 --draws 50 --seed 11 "
              "--out " + out1.string()) == 0);
  REQUIRE(run("prior-partitions --grid-rows 3 --grid-cols 3 --strategy gs3 --draws 50 --seed 11 "
              "--out " + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
  auto rows = netbart::read_csv_file(out1.string());
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == netbart::CsvRow{"draw", "partition"});
  // Every partition covers the nine vertices.
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::string part = rows[r][1];
    int vertices = 1;
    for (char c : part) {
      if (c == ' ' || c == ';') ++vertices;
    }
    CHECK(vertices == 9);
  }
}

TEST_CASE("coclust emits a labeled square matrix with unit diagonal") {
  fs::path dir = sandbox();
  fs::path out = dir / "cc.csv";
  REQUIRE(run("coclust --levels 6 --draws 300 --seed 5 --out " + out.string()) == 0);
  auto rows = netbart::read_csv_file(out.string());
  REQUIRE(rows.size() == 7);
  REQUIRE(rows[0].size() == 7);
  for (int i = 1; i <= 6; ++i) {
    CHECK(rows[i][0] == rows[0][i]);
    CHECK(rows[i][i] == "1");
  }

  fs::path out_oh = dir / "cc_onehot.csv";
  REQUIRE(run("coclust --levels 6 --onehot --draws 300 --seed 5 --out " + out_oh.string()) == 0);
  auto oh_rows = netbart::read_csv_file(out_oh.string());
  REQUIRE(oh_rows.size() == 7);
}

TEST_CASE("bench runs a tiny comparison deterministically") {
  fs::path dir = sandbox();
  fs::path out1 = dir / "bench1", out2 = dir / "bench2";
  std::string args = "bench --dgp dgp2 --n 80 --reps 2 --methods flex_unif,onehot --seed 9 "
                     "--trees 5 --iters 30 --burnin 15";
  REQUIRE(run(args + " --out " + out1.string()) == 0);
  REQUIRE(run(args + " --out " + out2.string()) == 0);
  CHECK(slurp(out1 / "metrics.csv") == slurp(out2 / "metrics.csv"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
  CHECK(fs::exists(out1 / "manifest.json"));

  auto rows = netbart::read_csv_file((out1 / "metrics.csv").string());
  CHECK(rows[0] == netbart::CsvRow{"method", "fold", "metric", "value"});
  // 2 methods x 2 folds x 4 metrics (mse, rmse, smse, ratio).
  CHECK(rows.size() == 1 + 16);
}

TEST_CASE("bad invocations fail with a nonzero exit") {
  fs::path dir = sandbox();
  CHECK(run("fit --data /nonexistent.csv --schema /nonexistent.json --out " +
            (dir / "x").string()) != 0);
  CHECK(run("bench --dgp dgp1 --methods gs2 --reps 1 --out " + (dir / "y").string()) != 0);
  CHECK(run("coclust --levels 4 --strategy gs9 --out " + (dir / "z.csv").string()) != 0);
}
