#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ckdv/cli.hpp"

using namespace ckdv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ckdv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ckdv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  std::string config(const std::string& extra_initial, double t_end, const std::string& tag) {
    return R"({"grid": {"L": 80, "n": 512}, "K": 1, "lambda": 1, "dt": 1e-3, "t_end": )" +
           std::to_string(t_end) + R"(, "sample_every": 100, "seed": 5,
      "initial_condition": )" + extra_initial + R"(,
      "output": {"state_path": ")" + (dir_ / (tag + "_state.csv")).string() +
           R"(", "charges_path": ")" + (dir_ / (tag + "_charges.csv")).string() + R"("}})";
  }

  fs::path dir_;
};

const std::string kSoliton = R"({"type": "soliton", "C": 1})";

}  // namespace

TEST_F(CliTest, SimulateZeroDurationWritesInitialState) {
  const auto cfg = write("zero.json", config(kSoliton, 0.0, "zero"));
  const Outcome o = run_cli({"simulate", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream sf(dir_ / "zero_state.csv");
  const StateFile state = read_state(sf);
  EXPECT_EQ(state.state.u(), one_soliton(SolitonSpec{}, state.state.grid(), 0.0).u());
  std::ifstream cf(dir_ / "zero_charges.csv");
  EXPECT_EQ(read_charges(cf).size(), 1u);
  EXPECT_NE(o.out.find("linf_error_vs_exact_translate 0"), std::string::npos);
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  const auto cfg = write("run.json", config(kSoliton, 0.2, "run"));
  ASSERT_EQ(run_cli({"simulate", "--config", cfg.string(), "--quiet"}).code, 0);
  const std::string state1 = slurp(dir_ / "run_state.csv");
  const std::string charges1 = slurp(dir_ / "run_charges.csv");
  ASSERT_EQ(run_cli({"simulate", "--config", cfg.string(), "--quiet"}).code, 0);
  EXPECT_EQ(slurp(dir_ / "run_state.csv"), state1);
  EXPECT_EQ(slurp(dir_ / "run_charges.csv"), charges1);
  EXPECT_EQ(charges1.rfind("# {\"seed\":5,", 0), 0u);
  std::ifstream cf(dir_ / "run_charges.csv");
  EXPECT_EQ(read_charges(cf).size(), 3u);
}

TEST_F(CliTest, SeedOverrideIsRecorded) {
  const auto cfg = write("seed.json", config(kSoliton, 0.0, "seed"));
  ASSERT_EQ(run_cli({"--seed", "77", "simulate", "--config", cfg.string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "seed_charges.csv").rfind("# {\"seed\":77,", 0), 0u);
}

TEST_F(CliTest, MalformedJsonReportsLocation) {
  const auto cfg = write("bad.json", "{\n  \"grid\": {\"L\": 80,,\n}");
  const Outcome o = run_cli({"simulate", "--config", cfg.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("line 2"), std::string::npos) << o.err;
}

TEST_F(CliTest, InvalidConfigIsAConfigError) {
  const auto cfg = write("bad.json", R"({"grid": {"L": 80, "n": 500}, "dt": 1e-3, "t_end": 1,
      "initial_condition": {"type": "soliton", "C": 1}})");
  EXPECT_EQ(run_cli({"simulate", "--config", cfg.string()}).code, 2);
  EXPECT_EQ(run_cli({"simulate"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--config", (dir_ / "missing.json").string()}).code, 2);
}

TEST_F(CliTest, BlowUpExitCode) {
  const auto cfg = write("blow.json", R"({"grid": {"L": 10, "n": 16}, "dt": 0.5, "t_end": 100,
      "initial_condition": {"type": "modes", "modes": [{"field": "u", "m": 1, "amplitude": 1e6}]}})");
  const Outcome o = run_cli({"simulate", "--config", cfg.string()});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("blow-up"), std::string::npos);
}

TEST_F(CliTest, ChargesOfZeroAndSolitonStates) {
  std::ostringstream zero;
  write_state(zero, FieldState::zero(Grid(80.0, 512), 1), 1.0, 3);
  const auto zpath = write("zero.csv", zero.str());
  const Outcome z = run_cli({"charges", zpath.string()});
  ASSERT_EQ(z.code, 0) << z.err;
  EXPECT_NE(z.out.find("\n0,0,0,0,0,0,0,0\n"), std::string::npos) << z.out;

  std::ostringstream sol;
  write_state(sol, one_soliton(SolitonSpec{}, Grid(80.0, 512), 0.0, 1), 1.0, 3);
  const auto spath = write("sol.csv", sol.str());
  const Outcome s = run_cli({"charges", spath.string()});
  ASSERT_EQ(s.code, 0);
  std::istringstream rows(s.out);
  const auto r = read_charges(rows);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].h1, 12.0, 1e-9);
  EXPECT_NEAR(r[0].h3, 24.0, 1e-9);
  EXPECT_NEAR(r[0].h5, -14.4, 1e-8);
}

TEST_F(CliTest, TruncatedStateFileIsRejected) {
  std::ostringstream sol;
  write_state(sol, FieldState::zero(Grid(80.0, 512), 1), 1.0, 3);
  const std::string text = sol.str();
  const std::size_t mid = text.size() / 3;
  const auto at_row = write("rows.csv", text.substr(0, text.find('\n', mid) + 1));
  const Outcome o = run_cli({"charges", at_row.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("truncated"), std::string::npos) << o.err;
  const auto mid_row = write("cut.csv", text.substr(0, text.find('\n', mid) + 3));
  EXPECT_EQ(run_cli({"charges", mid_row.string()}).code, 2);
}

TEST_F(CliTest, SolitonSubcommand) {
  const Outcome o = run_cli({"soliton", "--c", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream is(o.out);
  const StateFile sf = read_state(is);
  EXPECT_DOUBLE_EQ(sf.state.u()[256], 3.0);
  const auto report = nlohmann::json::parse(o.err);
  EXPECT_LT(report["residuals"]["oracle"]["residual"].get<double>(), 1e-8);
  EXPECT_GT(report["residuals"]["zero"]["residual"].get<double>(), 1e-1);
  EXPECT_TRUE(report["residuals"].contains("paper"));

  const fs::path out = dir_ / "s.csv";
  const Outcome f = run_cli({"soliton", "--c", "4", "--velocity", "paper", "--out", out.string()});
  ASSERT_EQ(f.code, 0);
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(f.out)["velocity"].get<double>(), 5.0);
  EXPECT_EQ(run_cli({"soliton", "--c", "1", "--L", "20"}).code, 2);
}

TEST_F(CliTest, VerifyRejectsUnknownSuite) {
  EXPECT_EQ(run_cli({"verify", "everything"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST_F(CliTest, VerifyHamiltonianWritesJson) {
  const fs::path json = dir_ / "ham.json";
  const Outcome o = run_cli({"verify", "hamiltonian", "--json", json.string()});
  EXPECT_EQ(o.code, 0) << o.out;
  const auto report = nlohmann::json::parse(slurp(json));
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["hamiltonian"]["dirac_vs_rhs_max_abs"].size(), 5u);
  EXPECT_NE(o.out.find("PASS"), std::string::npos);
}
