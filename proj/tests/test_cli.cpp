#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hopim/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hopim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hopim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    half_chain_ = write("half_chain.txt", "# half chain\n0 1 0.5\n1 2 0.5\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << body;
    return path;
  }

  fs::path dir_;
  std::string half_chain_;
};

}  // namespace

TEST_F(CliTest, SelectTwoHopOnHalfChain) {
  const auto r = run({"select", "--graph", half_chain_, "--model", "file", "--algo", "twohop", "--k", "1", "--rng-seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["seeds"], json::array({0}));
  EXPECT_DOUBLE_EQ(doc["marginal_gains"][0].get<double>(), 1.75);
  EXPECT_EQ(doc["rng_seed"], 5);
  EXPECT_EQ(doc["config"]["k"], 1);
  EXPECT_TRUE(doc.contains("elapsed_seconds"));
  EXPECT_TRUE(doc.contains("evaluations"));
}

TEST_F(CliTest, OneHopWithTwoHopsIsConfigError) {
  const auto r = run({"select", "--graph", half_chain_, "--model", "file", "--algo", "onehop", "--hops", "2", "--k", "1"});
  EXPECT_EQ(r.code, hopim::cli::kExitConfig);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "0"}).code, 1);
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "1", "--algo", "magic"}).code, 1);
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "1", "--diffusion", "lt", "--algo", "twohop"}).code, 1);
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "1", "--model", "nope"}).code, 1);
  EXPECT_EQ(run({"select", "--graph", half_chain_}).code, 1);
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "1", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run({"select", "--graph", (dir_ / "missing.txt").string(), "--k", "1"}).code, 2);
  const auto loop = write("loop.txt", "0 1\n2 2\n");
  const auto r = run({"select", "--graph", loop, "--k", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"select", "--graph", half_chain_, "--k", "4"}).code, 1);
}

TEST_F(CliTest, HighDegreeOnHalfChain) {
  const auto r = run({"select", "--graph", half_chain_, "--algo", "highdegree", "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["seeds"], json::array({0, 1}));
}

TEST_F(CliTest, SelectCsv) {
  const auto r = run({"select", "--graph", half_chain_, "--model", "file", "--k", "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("rank,node,marginal_gain\n1,0,1.75\n", 0), 0u) << r.out;
}

TEST_F(CliTest, EvaluateHalfChain) {
  const auto seeds = write("seeds.json", "[0]");
  const auto r = run({"evaluate", "--graph", half_chain_, "--model", "file", "--seeds", seeds, "--rng-seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["simulations"], 10000);
  EXPECT_EQ(doc["hop_limit"], "inf");
  EXPECT_LE(std::abs(doc["mean"].get<double>() - 1.75), 4 * doc["std_error"].get<double>());
  EXPECT_EQ(doc["rng_seed"], 9);
}

TEST_F(CliTest, EvaluateRecordsEntropySeedForReplay) {
  const auto seeds = write("seeds.txt", "0\n");
  const auto first = json::parse(run({"evaluate", "--graph", half_chain_, "--model", "file", "--seeds", seeds, "--sims", "500"}).out);
  const auto seed = first["rng_seed"].get<std::uint64_t>();
  const auto again = json::parse(run({"evaluate", "--graph", half_chain_, "--model", "file", "--seeds", seeds, "--sims", "500",
                                      "--rng-seed", std::to_string(seed)})
                                     .out);
  EXPECT_EQ(first["mean"], again["mean"]);
}

TEST_F(CliTest, EvaluateAllNodesIsExact) {
  const auto seeds = write("seeds.txt", "0\n1\n2\n");
  const auto r = run({"evaluate", "--graph", half_chain_, "--model", "file", "--seeds", seeds, "--sims", "100", "--rng-seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["mean"].get<double>(), 3.0);
  EXPECT_EQ(doc["std_error"].get<double>(), 0.0);
}

TEST_F(CliTest, EvaluateUnknownIdIsDataError) {
  const auto seeds = write("seeds.json", "[99]");
  EXPECT_EQ(run({"evaluate", "--graph", half_chain_, "--seeds", seeds, "--rng-seed", "1"}).code, 2);
  const auto bad = write("bad.txt", "zero\n");
  EXPECT_EQ(run({"evaluate", "--graph", half_chain_, "--seeds", bad, "--rng-seed", "1"}).code, 2);
  EXPECT_EQ(run({"evaluate", "--graph", half_chain_, "--seeds", seeds, "--hop-limit", "-3"}).code, 1);
}

TEST_F(CliTest, EvaluateHopLimit) {
  const auto seeds = write("seeds.json", "[0]");
  const auto g = write("chain.txt", "0 1 1\n1 2 1\n");
  const auto r = run({"evaluate", "--graph", g, "--model", "file", "--seeds", seeds, "--hop-limit", "1", "--sims", "50",
                      "--rng-seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["mean"].get<double>(), 2.0);
  EXPECT_EQ(doc["hop_limit"], 1);
}

TEST_F(CliTest, SelectOutputRoundTripsThroughEvaluate) {
  const auto sparse = write("sparse.txt", "100 200\n200 300\n300 100\n400 100\n500 400\n");
  const auto out = (dir_ / "sel.json").string();
  ASSERT_EQ(run({"select", "--graph", sparse, "--compact-ids", "--k", "2", "--out", out, "--rng-seed", "3"}).code, 0);
  const auto sel = json::parse(std::ifstream(out));
  const auto r = run({"evaluate", "--graph", sparse, "--compact-ids", "--seeds", out, "--sims", "10", "--rng-seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ev = json::parse(r.out);
  EXPECT_EQ(ev["seeds"], sel["seeds"]);
  for (const auto& id : sel["seeds"]) EXPECT_GE(id.get<int>(), 100);
}

TEST_F(CliTest, BoundsCsvAndJson) {
  const auto csv = run({"bounds", "--graph", half_chain_, "--model", "file", "--hops", "2", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out, "node,bound\n0,1.75\n1,1.5\n2,1\n");
  const auto js = json::parse(run({"bounds", "--graph", half_chain_, "--model", "file", "--hops", "1"}).out);
  EXPECT_DOUBLE_EQ(js["bounds"][0]["bound"].get<double>(), 1.5);
}

TEST_F(CliTest, AlphaSurfaceCsv) {
  const auto r = run({"alpha-surface", "--p-steps", "2", "--ratio-steps", "3", "--truncation", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "p,seed_ratio,alpha");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, BenchRows) {
  const auto r = run({"bench", "--synthetic", "2000,8000,2.5", "--algos", "onehop,twohop,twohop-o", "--k", "5",
                      "--scales", "1.0,1.5", "--sims", "50", "--rng-seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "algorithm,k,scale_factor,seconds,evaluations,spread_estimate");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, BenchEmptyListIsConfigError) {
  EXPECT_EQ(run({"bench", "--graph", half_chain_, "--scales", ""}).code, 1);
  EXPECT_EQ(run({"bench", "--graph", half_chain_, "--algos", ""}).code, 1);
  EXPECT_EQ(run({"bench", "--synthetic", "10,x,2"}).code, 1);
}
