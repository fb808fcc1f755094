#ifndef HAWKES_RISK_MONTECARLO_HPP_
#define HAWKES_RISK_MONTECARLO_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "hawkes_risk/analytics.hpp"
#include "hawkes_risk/hawkes.hpp"
#include "hawkes_risk/markov_chain.hpp"
#include "hawkes_risk/parallel.hpp"
#include "hawkes_risk/random.hpp"
#include "hawkes_risk/risk_process.hpp"
#include "hawkes_risk/stats.hpp"

namespace hawkes_risk {

struct Scenario {
  HawkesParams hawkes;
  MarkChain chain;
  RiskParams risk;
};

struct ExperimentConfig {
  Scenario scenario;
  // Horizon T for the LLN run, scaling index n for the FCLT run (t = 1).
  double horizon = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  // 0 picks the default worker count. Results never depend on it.
  std::size_t workers = 0;
};

struct Metric {
  std::string name;
  double estimate = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t replications = 0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<Metric> metrics;

  bool passed() const {
    for (const auto &m : metrics)
      if (!m.pass) return false;
    return !metrics.empty();
  }
  const Metric *find(const std::string &name) const {
    for (const auto &m : metrics)
      if (m.name == name) return &m;
    return nullptr;
  }
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
};

// Rounding allowance for deterministic comparisons (zero standard error).
inline constexpr double kRoundingSlack = 1e-12;
// Allowed |empirical ruin frequency - diffusion formula| for GCHP paths; the
// diffusion approximation carries no error bound of its own.
inline constexpr double kDiffusionGapTolerance = 0.05;
// Relative allowance on the FCLT variance.
inline constexpr double kFcltVarianceTolerance = 0.10;
inline constexpr double kKsSignificance = 0.001;
// KS distance allowed between ruin times of GCHP paths and the inverse Gaussian.
inline constexpr double kRuinTimeKsTolerance = 0.1;

namespace detail {

inline void require_replications(std::size_t reps, std::size_t minimum, const char *what) {
  if (reps < minimum)
    throw std::invalid_argument(std::string(what) + ": replications must be >= " + std::to_string(minimum));
}

inline Metric within_standard_errors(std::string name, const stats::Moments &m, double reference, double k = 3.0) {
  Metric out;
  out.name = std::move(name);
  out.estimate = m.mean;
  out.std_error = m.std_error();
  out.reference = reference;
  out.tolerance = k * out.std_error + kRoundingSlack * std::max(1.0, std::abs(reference));
  out.pass = std::abs(out.estimate - reference) <= out.tolerance;
  out.replications = m.n;
  return out;
}

}  // namespace detail

// Law of large numbers: R(T)/T against c - a* lambda/(1 - mu_hat) (+ u/T, the
// deterministic capital term at finite T), and N(T)/T against the stationary
// Hawkes rate.
inline ExperimentReport run_lln_experiment(const ExperimentConfig &cfg) {
  if (!(cfg.horizon >= 1e3)) throw std::invalid_argument("lln: horizon must be >= 1000");
  detail::require_replications(cfg.replications, 2, "lln");
  const Scenario &sc = cfg.scenario;
  const AsymptoticSummary summary = asymptotic_summary(sc.hawkes, sc.chain, sc.risk);
  const double T = cfg.horizon;

  std::vector<double> surplus_rate(cfg.replications), arrival_rate(cfg.replications);
  parallel_for(cfg.replications, resolve_workers(cfg.workers), [&](std::size_t i) {
    const RiskPath path = simulate_risk_path(sc.hawkes, sc.chain, sc.risk, T, cfg.seed, i);
    surplus_rate[i] = path.final_surplus / T;
    arrival_rate[i] = static_cast<double>(path.claims()) / T;
  });

  ExperimentReport report;
  report.experiment = "lln";
  report.metrics.push_back(
      detail::within_standard_errors("surplus_rate", stats::moments(surplus_rate), summary.drift + sc.risk.u / T));
  report.metrics.push_back(detail::within_standard_errors("arrival_rate", stats::moments(arrival_rate), summary.rate));
  return report;
}

// Normalised residuals (R(n) - (c n - a* N(n))) / sqrt(n), one per replication.
inline std::vector<double> fclt_residuals(const ExperimentConfig &cfg) {
  const Scenario &sc = cfg.scenario;
  const double a_star = mark_mean(sc.chain);
  const double n = cfg.horizon;
  std::vector<double> out(cfg.replications);
  parallel_for(cfg.replications, resolve_workers(cfg.workers), [&](std::size_t i) {
    const RiskPath path = simulate_risk_path(sc.hawkes, sc.chain, sc.risk, n, cfg.seed, i);
    const double centred = path.final_surplus - (sc.risk.c * n - a_star * static_cast<double>(path.claims()));
    out[i] = centred / std::sqrt(n);
  });
  return out;
}

// Diffusion limit at t = 1. The residual has exact mean u/sqrt(n) at finite n,
// so the normal reference is centred there (it tends to 0).
inline ExperimentReport run_fclt_experiment(const ExperimentConfig &cfg) {
  if (!(cfg.horizon >= 100.0)) throw std::invalid_argument("fclt: n must be >= 100");
  detail::require_replications(cfg.replications, 500, "fclt");
  const Scenario &sc = cfg.scenario;
  const AsymptoticSummary summary = asymptotic_summary(sc.hawkes, sc.chain, sc.risk);
  if (!(summary.sigma > 0.0)) throw std::invalid_argument("fclt: scenario has sigma = 0; nothing to test");
  const double variance = summary.sigma * summary.sigma;
  const double centre = sc.risk.u / std::sqrt(cfg.horizon);

  const std::vector<double> residuals = fclt_residuals(cfg);
  const stats::Moments m = stats::moments(residuals);

  ExperimentReport report;
  report.experiment = "fclt";

  Metric var;
  var.name = "fclt_variance";
  var.estimate = m.variance;
  var.std_error = m.variance_std_error();
  var.reference = variance;
  var.tolerance = kFcltVarianceTolerance * variance;
  var.pass = std::abs(var.estimate - var.reference) <= var.tolerance;
  var.replications = m.n;
  report.metrics.push_back(var);

  report.metrics.push_back(detail::within_standard_errors("fclt_mean", m, centre));

  const double d = stats::ks_statistic(residuals, [&](double x) { return normal_cdf((x - centre) / summary.sigma); });
  Metric ks;
  ks.name = "fclt_ks_pvalue";
  ks.estimate = stats::ks_pvalue(d, residuals.size());
  ks.reference = kKsSignificance;
  ks.tolerance = kKsSignificance;
  ks.pass = ks.estimate > kKsSignificance;
  ks.replications = m.n;
  report.metrics.push_back(ks);
  return report;
}

// Fraction of simulated surplus paths ruined before tau, against the diffusion
// formula. For m > 0 also compares the ruin epochs of ruined paths with the
// inverse-Gaussian law truncated at tau.
inline ExperimentReport estimate_ruin_probability(const ExperimentConfig &cfg, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("ruin: tau must be > 0");
  detail::require_replications(cfg.replications, 1000, "ruin");
  const Scenario &sc = cfg.scenario;
  const AsymptoticSummary summary = asymptotic_summary(sc.hawkes, sc.chain, sc.risk);
  const double reference = ruin_probability(sc.risk.u, tau, summary);

  std::vector<double> ruined(cfg.replications);
  std::vector<double> epoch(cfg.replications, std::numeric_limits<double>::quiet_NaN());
  parallel_for(cfg.replications, resolve_workers(cfg.workers), [&](std::size_t i) {
    const RiskPath path = simulate_risk_path(sc.hawkes, sc.chain, sc.risk, tau, cfg.seed, i);
    ruined[i] = path.ruin ? 1.0 : 0.0;
    if (path.ruin) epoch[i] = *path.ruin;
  });

  const double n = static_cast<double>(cfg.replications);
  const double freq = stats::pairwise_sum(ruined) / n;

  ExperimentReport report;
  report.experiment = "ruin";
  Metric psi;
  psi.name = "ruin_probability";
  psi.estimate = freq;
  psi.std_error = std::sqrt(freq * (1.0 - freq) / n);
  psi.reference = reference;
  psi.tolerance = kDiffusionGapTolerance;
  psi.pass = std::abs(freq - reference) <= kDiffusionGapTolerance;
  psi.replications = cfg.replications;
  report.metrics.push_back(psi);

  Metric gap = psi;
  gap.name = "diffusion_gap";
  gap.estimate = freq - reference;
  gap.reference = 0.0;
  report.metrics.push_back(gap);

  std::vector<double> times;
  for (double t : epoch)
    if (!std::isnan(t)) times.push_back(t);
  if (summary.drift > 0.0 && sc.risk.u > 0.0 && !times.empty()) {
    const double mass = conditional_ruin_cdf(sc.risk.u, tau, summary);
    const double d = stats::ks_statistic(times, [&](double t) {
      return t <= 0.0 ? 0.0 : conditional_ruin_cdf(sc.risk.u, t, summary) / mass;
    });
    Metric ks;
    ks.name = "ruin_time_ks_distance";
    ks.estimate = d;
    ks.reference = 0.0;
    ks.tolerance = kRuinTimeKsTolerance;
    ks.pass = d <= kRuinTimeKsTolerance;
    ks.replications = times.size();
    report.metrics.push_back(ks);
  }
  return report;
}

// Probability that u + m t + sigma W(t) goes below 0 before tau, by an Euler
// grid with the exact Brownian-bridge crossing probability between grid
// points. Each path contributes 1 - prod(1 - p_cross), its conditional ruin
// probability given the grid values.
inline Estimate brownian_first_passage_mc(double m, double sigma, double u, double tau, std::size_t paths,
                                          double step, std::uint64_t seed, std::size_t workers = 0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("brownian_first_passage_mc: sigma must be > 0");
  if (!(u >= 0.0)) throw std::invalid_argument("brownian_first_passage_mc: u must be >= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("brownian_first_passage_mc: tau must be > 0");
  if (!(step > 0.0 && step <= 1e-3 * tau * (1.0 + 1e-12)))
    throw std::invalid_argument("brownian_first_passage_mc: step must lie in (0, 1e-3 tau]");
  if (paths < 2) throw std::invalid_argument("brownian_first_passage_mc: need at least 2 paths");
  if (u == 0.0) return {1.0, 0.0, paths};

  const auto steps = static_cast<std::size_t>(std::ceil(tau / step - 1e-9));
  const double dt = tau / static_cast<double>(steps);
  const double drift_step = m * dt;
  const double vol_step = sigma * std::sqrt(dt);
  const double bridge_scale = 2.0 / (sigma * sigma * dt);

  std::vector<double> ruin(paths);
  parallel_for(paths, resolve_workers(workers), [&](std::size_t i) {
    CounterRng rng(StreamId{seed, i, StreamRole::kDiffusion});
    boost::random::normal_distribution<double> normal;
    double level = u;  // distance to the barrier
    double survive = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double next = level + drift_step + vol_step * normal(rng);
      if (next <= 0.0) {
        survive = 0.0;
        break;
      }
      const double exponent = bridge_scale * level * next;
      if (exponent < 745.0) survive *= -std::expm1(-exponent);
      level = next;
    }
    ruin[i] = 1.0 - survive;
  });
  const stats::Moments mo = stats::moments(ruin);
  return {mo.mean, mo.std_error(), paths};
}

inline std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(9) << x;
  return os.str();
}

// CSV, one row per metric.
inline void write_report_csv(std::ostream &os, const ExperimentReport &report) {
  os << "name,estimate,std_error,reference,tolerance,pass,replications\n";
  for (const auto &m : report.metrics) {
    os << m.name << ',' << format_number(m.estimate) << ',' << format_number(m.std_error) << ','
       << format_number(m.reference) << ',' << format_number(m.tolerance) << ',' << (m.pass ? "true" : "false")
       << ',' << m.replications << '\n';
  }
}

inline void write_report_text(std::ostream &os, const ExperimentReport &report) {
  os << "experiment " << report.experiment << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto &m : report.metrics) {
    os << "  [" << (m.pass ? "pass" : "FAIL") << "] " << m.name << " = " << format_number(m.estimate) << " (se "
       << format_number(m.std_error) << ", n=" << m.replications << "), reference " << format_number(m.reference)
       << ", |diff| " << format_number(std::abs(m.estimate - m.reference)) << " vs tolerance "
       << format_number(m.tolerance) << '\n';
  }
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_MONTECARLO_HPP_
