#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hawkes_risk/scenario.hpp"

namespace hawkes_risk {
namespace {

std::string load(const std::string &name) {
  std::ifstream in(std::string(HAWKES_RISK_SCENARIO_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char *kMinimal = R"({
  "hawkes": {"lambda": 1.0, "kernel": {"type": "exponential", "params": {"alpha": 0.5, "beta": 1.0}}},
  "chain": {"P": [[0.6, 0.4], [0.3, 0.7]], "a": [1.0, -1.0]},
  "risk": {"u": 2.0, "c": 1.0}
})";

std::string error_of(const std::string &doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError &e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string &from, const std::string &to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

TEST(Scenario, MinimalDocument) {
  const ScenarioFile f = parse_scenario(kMinimal);
  EXPECT_EQ(f.scenario.hawkes.lambda(), 1.0);
  EXPECT_NEAR(f.scenario.hawkes.stationary_rate(), 2.0, 1e-15);
  // init defaults to the stationary law
  EXPECT_NEAR(f.scenario.chain.initial()(0), 3.0 / 7.0, 1e-14);
  EXPECT_EQ(f.scenario.risk.u, 2.0);
  EXPECT_TRUE(f.experiment.empty());
}

TEST(Scenario, RoundTripIsExact) {
  for (const char *name : {"asymmetric_chain.json", "unit_diffusion.json", "single_mark.json", "moderate_ruin.json",
                           "power_law.json"}) {
    const ScenarioFile f = parse_scenario(load(name));
    const std::string text = serialize_scenario(f);
    const ScenarioFile g = parse_scenario(text);
    EXPECT_TRUE(same_configuration(f, g)) << name;
    EXPECT_EQ(serialize_scenario(g), text) << name;
  }
}

TEST(Scenario, ExperimentSettings) {
  const ScenarioFile f = parse_scenario(load("moderate_ruin.json"));
  EXPECT_EQ(f.experiment.kind, std::optional<std::string>("ruin"));
  EXPECT_EQ(f.experiment.tau, std::optional<double>(50.0));
  EXPECT_EQ(f.experiment.replications, std::optional<std::size_t>(10000));
  EXPECT_EQ(f.experiment.seed, std::optional<std::uint64_t>(11));
  EXPECT_TRUE(f.scenario.hawkes.has_lambda0());
}

TEST(Scenario, UnknownFieldsRejectedWithPath) {
  EXPECT_EQ(error_of(replace(kMinimal, "\"u\": 2.0", "\"u\": 2.0, \"v\": 1")), "risk.v: unknown field");
  EXPECT_NE(error_of(replace(kMinimal, "\"beta\": 1.0", "\"beta\": 1.0, \"gamma\": 2")).find("hawkes.kernel.params"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal).insert(1, "\"extra\": 0,")).find("extra"), std::string::npos);
}

TEST(Scenario, MissingAndMistypedFields) {
  EXPECT_NE(error_of(replace(kMinimal, "\"u\": 2.0, ", "")).find("risk.u"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "\"lambda\": 1.0", "\"lambda\": \"one\"")).find("hawkes.lambda"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[0.3, 0.7]", "[0.3]")).find("chain.P[1]"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "exponential", "gamma")).find("hawkes.kernel.type"), std::string::npos);
  EXPECT_NE(error_of("{not json").find("malformed"), std::string::npos);
}

TEST(Scenario, DomainErrorsCarrySection) {
  EXPECT_NE(error_of(replace(kMinimal, "\"alpha\": 0.5", "\"alpha\": 1.5")).find("branching ratio"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[0.6, 0.4]", "[0.6, 0.5]")).find("chain"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[0.6, 0.4], [0.3, 0.7]", "[1.0, 0.0], [0.0, 1.0]")).find("ergodic"),
            std::string::npos);
  EXPECT_NE(error_of(load("supercritical.json")).find("branching ratio"), std::string::npos);
}

TEST(Scenario, PremiumKinds) {
  EXPECT_EQ(parse_premium_kind("variance"), PremiumKind::kVariance);
  EXPECT_THROW(parse_premium_kind("max"), ScenarioError);
  EXPECT_NE(error_of(replace(kMinimal, "\"c\": 1.0}", "\"c\": 1.0}, \"experiment\": {\"principle\": \"max\"}"))
                .find("experiment.principle"),
            std::string::npos);
}

}  // namespace
}  // namespace hawkes_risk
