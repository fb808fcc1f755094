#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "hawkes_risk/montecarlo.hpp"
#include "oracles.hpp"

namespace hawkes_risk {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const HawkesParams kHawkes(1.0, KernelSpec::exponential(0.5, 1.0));

Scenario asymmetric_scenario(double u = 0.0) {
  const MarkChain chain(oracles::two_state(0.6, 0.7), vec({1.0, -1.0}), vec({3.0 / 7.0, 4.0 / 7.0}));
  return Scenario{kHawkes, chain, RiskParams(u, 1.0)};
}

Scenario moderate_scenario() {
  const HawkesParams h(1.0, KernelSpec::exponential(0.5, 1.0), 2.0);
  const MarkChain chain(oracles::two_state(0.5, 0.5), vec({0.2, -0.2}), vec({0.5, 0.5}));
  return Scenario{h, chain, RiskParams(2.0, 0.05)};
}

std::string csv(const ExperimentReport &r) {
  std::ostringstream os;
  write_report_csv(os, r);
  return os.str();
}

TEST(BrownianOracle, MatchesClosedForm) {
  const Estimate e = brownian_first_passage_mc(0.5, 1.0, 1.0, 1.0, 100000, 1e-3, 5);
  EXPECT_NEAR(e.value, 0.1803118186, 3.5 * e.std_error);
  EXPECT_LT(e.std_error, 0.0015);
}

TEST(BrownianOracle, ZeroDriftReflection) {
  // m = 0: P(min < -u) = 2 (1 - Phi(u / sigma sqrt(tau))) = 0.617075...
  const Estimate e = brownian_first_passage_mc(0.0, 1.0, 0.5, 1.0, 50000, 1e-3, 9);
  EXPECT_NEAR(e.value, 2.0 * (1.0 - normal_cdf(0.5)), 3.5 * e.std_error);
}

TEST(BrownianOracle, ZeroCapitalAndValidation) {
  EXPECT_EQ(brownian_first_passage_mc(0.5, 1.0, 0.0, 1.0, 10, 1e-3, 1).value, 1.0);
  EXPECT_THROW(brownian_first_passage_mc(0.5, 1.0, 1.0, 1.0, 10, 1e-2, 1), std::invalid_argument);
  EXPECT_THROW(brownian_first_passage_mc(0.5, 0.0, 1.0, 1.0, 10, 1e-3, 1), std::invalid_argument);
  EXPECT_THROW(brownian_first_passage_mc(0.5, 1.0, -1.0, 1.0, 10, 1e-3, 1), std::invalid_argument);
}

TEST(BrownianOracle, IndependentOfWorkers) {
  const Estimate a = brownian_first_passage_mc(0.5, 1.0, 1.0, 1.0, 2000, 1e-3, 3, 1);
  const Estimate b = brownian_first_passage_mc(0.5, 1.0, 1.0, 1.0, 2000, 1e-3, 3, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Lln, ZeroMarksGiveExactSurplusRate) {
  const MarkChain chain(oracles::two_state(0.5, 0.5), vec({0.0, 0.0}), vec({0.5, 0.5}));
  const ExperimentConfig cfg{Scenario{kHawkes, chain, RiskParams(3.0, 1.5)}, 1000.0, 4, 1, 0};
  const ExperimentReport r = run_lln_experiment(cfg);
  const Metric *m = r.find("surplus_rate");
  ASSERT_NE(m, nullptr);
  EXPECT_NEAR(m->estimate, 1.5 + 3.0 / 1000.0, 1e-12);
  EXPECT_TRUE(m->pass);
}

TEST(Lln, AsymmetricChain) {
  const ExperimentReport r = run_lln_experiment({asymmetric_scenario(), 5000.0, 10, 17, 0});
  EXPECT_TRUE(r.passed()) << csv(r);
  EXPECT_NEAR(r.find("surplus_rate")->reference, 1.0 + 2.0 / 7.0, 1e-12);
  EXPECT_NEAR(r.find("arrival_rate")->reference, 2.0, 1e-12);
}

TEST(Lln, Validation) {
  EXPECT_THROW(run_lln_experiment({asymmetric_scenario(), 10.0, 10, 1, 0}), std::invalid_argument);
  EXPECT_THROW(run_lln_experiment({asymmetric_scenario(), 1000.0, 1, 1, 0}), std::invalid_argument);
}

TEST(Fclt, ResidualMeanIsCapitalOverRootN) {
  // With zero marks every residual equals u / sqrt(n).
  const MarkChain chain(oracles::two_state(0.5, 0.5), vec({0.0, 0.0}), vec({0.5, 0.5}));
  const auto res = fclt_residuals({Scenario{kHawkes, chain, RiskParams(4.0, 1.0)}, 100.0, 3, 1, 0});
  for (double r : res) EXPECT_NEAR(r, 0.4, 1e-12);
}

TEST(Fclt, AsymmetricChain) {
  const ExperimentReport r = run_fclt_experiment({asymmetric_scenario(1.0), 200.0, 600, 23, 0});
  EXPECT_TRUE(r.passed()) << csv(r);
  EXPECT_NEAR(r.find("fclt_variance")->reference, 2.0 * 1.8192419825072886, 1e-9);
  EXPECT_NEAR(r.find("fclt_mean")->reference, 1.0 / std::sqrt(200.0), 1e-15);
}

TEST(Fclt, Validation) {
  EXPECT_THROW(run_fclt_experiment({asymmetric_scenario(), 50.0, 600, 1, 0}), std::invalid_argument);
  EXPECT_THROW(run_fclt_experiment({asymmetric_scenario(), 200.0, 100, 1, 0}), std::invalid_argument);
}

TEST(Ruin, ModerateScenarioCloseToDiffusion) {
  const ExperimentReport r = estimate_ruin_probability({moderate_scenario(), 0.0, 10000, 11, 0}, 50.0);
  EXPECT_TRUE(r.passed()) << csv(r);
  ASSERT_NE(r.find("ruin_time_ks_distance"), nullptr);
  EXPECT_LE(std::abs(r.find("diffusion_gap")->estimate), 0.05);
}

TEST(Ruin, Validation) {
  EXPECT_THROW(estimate_ruin_probability({moderate_scenario(), 0.0, 10, 1, 0}, 1.0), std::invalid_argument);
  EXPECT_THROW(estimate_ruin_probability({moderate_scenario(), 0.0, 1000, 1, 0}, 0.0), std::invalid_argument);
}

TEST(Determinism, ReportsIdenticalAcrossWorkers) {
  const ExperimentConfig base{moderate_scenario(), 0.0, 1000, 5, 1};
  std::string first;
  for (std::size_t w : {1, 3, 8}) {
    ExperimentConfig cfg = base;
    cfg.workers = w;
    const std::string s = csv(estimate_ruin_probability(cfg, 20.0));
    if (first.empty()) first = s;
    EXPECT_EQ(s, first) << "workers " << w;
  }
  ExperimentConfig lln{asymmetric_scenario(), 1000.0, 6, 2, 1};
  const std::string one = csv(run_lln_experiment(lln));
  lln.workers = 5;
  EXPECT_EQ(csv(run_lln_experiment(lln)), one);
}

TEST(Report, CsvLayout) {
  ExperimentReport r;
  r.experiment = "x";
  r.metrics.push_back(Metric{"m", 0.5, 0.01, 0.49, 0.03, true, 10});
  EXPECT_EQ(csv(r), "name,estimate,std_error,reference,tolerance,pass,replications\nm,0.5,0.01,0.49,0.03,true,10\n");
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(ExperimentReport{}.passed());
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
}

}  // namespace
}  // namespace hawkes_risk
