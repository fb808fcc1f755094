#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hawkes_risk/cli.hpp"

namespace hawkes_risk::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hawkes-risk");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const char *name) { return std::string(HAWKES_RISK_SCENARIO_DIR) + "/" + name; }

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "hawkes_risk_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, AnalyzePrintsConstants) {
  const Result r = invoke({"analyze", scenario("asymmetric_chain.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("mu_hat,0.5\n"), std::string::npos);
  EXPECT_NE(r.out.find("rate,2\n"), std::string::npos);
  EXPECT_NE(r.out.find("a_star,-0.142857143\n"), std::string::npos);
  EXPECT_NE(r.out.find("drift,1.28571429\n"), std::string::npos);
  EXPECT_NE(r.out.find("net_profit_condition,true\n"), std::string::npos);
}

TEST(Cli, UnstableScenarioIsRejected) {
  const Result r = invoke({"analyze", scenario("supercritical.json")});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("branching ratio"), std::string::npos);
}

TEST(Cli, BadArgumentsExitOne) {
  EXPECT_EQ(invoke({}).code, kExitInvalid);
  EXPECT_EQ(invoke({"analyze"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"analyze", scenario("missing.json")}).code, kExitInvalid);
  EXPECT_EQ(invoke({"premium", scenario("single_mark.json"), "--principle", "max"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"ruin", scenario("asymmetric_chain.json")}).code, kExitInvalid);  // no tau
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Cli, Premium) {
  Result r = invoke({"premium", scenario("single_mark.json"), "--principle", "expected-value", "--theta", "0.2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "premium,2.4\n");
  r = invoke({"premium", scenario("single_mark.json")});  // settings from the file
  EXPECT_EQ(r.out, "premium,2.4\n");
  EXPECT_EQ(invoke({"premium", scenario("single_mark.json"), "--theta", "0"}).code, kExitInvalid);
}

TEST(Cli, RuinFormulaAndTable) {
  const Result r = invoke({"ruin", scenario("unit_diffusion.json"), "--u", "1", "--tau", "1", "--grid-points", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("ruin_probability,0.180311819\nultimate_ruin_probability,0.367879441\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("tau,density,conditional_cdf\n0.02,"), std::string::npos) << r.out;
  std::size_t rows = 0;
  for (char ch : r.out) rows += ch == '\n';
  EXPECT_EQ(rows, 2u + 1u + 1u + 5u);
}

TEST(Cli, RuinZeroCapitalSkipsTable) {
  const Result r = invoke({"ruin", scenario("unit_diffusion.json"), "--u", "0", "--tau", "1"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "ruin_probability,1\nultimate_ruin_probability,1\n");
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);
}

TEST(Cli, SimulateWritesPathAndScenario) {
  const fs::path csv = scratch("path.csv"), emitted = scratch("emitted.json");
  Result r = invoke({"simulate", scenario("asymmetric_chain.json"), "--horizon", "50", "--seed", "3", "--out", csv.string(),
                     "--emit-scenario", emitted.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string first = slurp(csv);
  EXPECT_EQ(first.rfind("epoch,state,mark,surplus_after\n", 0), 0u);
  EXPECT_GT(first.size(), 100u);

  // Re-running from the emitted scenario reproduces the path.
  r = invoke({"simulate", emitted.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, first);
  const ScenarioFile e = parse_scenario(slurp(emitted));
  EXPECT_EQ(e.experiment.horizon, std::optional<double>(50.0));
  EXPECT_EQ(e.experiment.seed, std::optional<std::uint64_t>(3));
}

TEST(Cli, VerifyLlnCsvAndExitCode) {
  const Result r = invoke({"verify-lln", scenario("asymmetric_chain.json"), "--horizon", "2000", "--replications", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.rfind("name,estimate,std_error,reference,tolerance,pass,replications\nsurplus_rate,", 0), 0u);
  EXPECT_NE(r.err.find("experiment lln: PASS"), std::string::npos);
}

TEST(Cli, VerifyFailureExitsTwo) {
  // Far too few paths for the gap tolerance with a tiny capital: the diffusion formula is off.
  const Result r =
      invoke({"verify-ruin", scenario("unit_diffusion.json"), "--tau", "1", "--replications", "2000", "--seed", "1"});
  EXPECT_EQ(r.code, kExitCheckFailed) << r.out;
}

TEST(Cli, VerifyOutputIndependentOfWorkers) {
  std::string first;
  for (const char *w : {"1", "4", "8"}) {
    const fs::path p = scratch(std::string("ruin_") + w + ".csv");
    const Result r = invoke({"verify-ruin", scenario("moderate_ruin.json"), "--replications", "1000", "--tau", "20",
                             "--workers", w, "--out", p.string()});
    ASSERT_NE(r.code, kExitInvalid) << r.err;
    const std::string s = slurp(p);
    if (first.empty()) first = s;
    EXPECT_EQ(s, first) << "workers " << w;
  }
}

}  // namespace
}  // namespace hawkes_risk::cli
