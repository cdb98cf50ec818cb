#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kData = RFLUX_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string(RFLUX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (std::string(RFLUX_CLI_PATH).empty()) GTEST_SKIP() << "CLI not built";
    dir_ = fs::temp_directory_path() / ("rflux_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("simulate --glucose 1 --xylose 1"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, SimulateWritesTrajectoryAndConfig) {
  const fs::path out = dir_ / "t.csv";
  ASSERT_EQ(run("simulate --model " + (kData / "e_coli_core_xyl.json").string() +
                " --glucose 10 --xylose 10 -o " + out.string()),
            0);
  std::istringstream csv(read_file(out));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "time_h,biomass_gdw_per_l,glucose_mM,xylose_mM");
  std::getline(csv, line);
  EXPECT_EQ(line, "0.1,0.0103913954,9.98962417,9.99999067");
  int rows = 1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 200);
  const auto cfg = nlohmann::json::parse(read_file(dir_ / "t.config.json"));
  EXPECT_EQ(cfg["kinetics"]["dt"], 0.1);
  EXPECT_EQ(cfg["glucose_mM"], 10.0);
}

TEST_F(Cli, ModelErrorsExitTwo) {
  EXPECT_EQ(run("simulate --model " + (dir_ / "missing.json").string() + " --glucose 1 --xylose 1 -o " +
                (dir_ / "t.csv").string()),
            2);
  // the plain core model has no xylose exchange
  EXPECT_EQ(run("simulate --model " + (kData / "e_coli_core.json").string() + " --glucose 1 --xylose 1 -o " +
                (dir_ / "t.csv").string()),
            2);
}

TEST_F(Cli, BadConfigExitsOne) {
  std::ofstream(dir_ / "study.json") << R"({"models": [], "seeds": {"ensemble": 1}})";
  EXPECT_EQ(run("bench --config " + (dir_ / "study.json").string()), 1);
  EXPECT_EQ(run("study --config " + (dir_ / "absent.json").string()), 1);
}

TEST_F(Cli, BenchAndPareto) {
  std::ofstream(dir_ / "study.json") << R"({
  "models": [{"id": "core", "path": ")" << (kData / "e_coli_core_xyl.json").generic_string() << R"("}],
  "ensemble": {"n_templates": 4, "samples_per_template": 5, "train_per_template": 4},
  "tasks": {"count": 6},
  "prefixes": [1, 200],
  "seeds": {"ensemble": 1, "tasks": 2, "kernel": 3, "generalisation": 4}
})";
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("-j 2 bench --config " + (dir_ / "study.json").string() + " --out-dir " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "accuracy.csv"));
  EXPECT_TRUE(fs::exists(out / "baseline.csv"));
  EXPECT_TRUE(fs::exists(out / "resolved_config.json"));
  ASSERT_EQ(run("pareto --accuracy " + (out / "accuracy.csv").string() + " -o " + (dir_ / "p.json").string()), 0);
  const auto p = nlohmann::json::parse(read_file(dir_ / "p.json"));
  EXPECT_EQ(p["front"], nlohmann::json::array({"core"}));
  EXPECT_EQ(run("pareto --accuracy " + (dir_ / "study.json").string()), 1);
}
