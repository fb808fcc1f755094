#ifndef HAWKES_RISK_CLI_HPP_
#define HAWKES_RISK_CLI_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkes_risk/analytics.hpp"
#include "hawkes_risk/montecarlo.hpp"
#include "hawkes_risk/risk_process.hpp"
#include "hawkes_risk/scenario.hpp"

namespace hawkes_risk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

inline constexpr std::size_t kDefaultGridPoints = 200;

// tau grid for the time-to-ruin density table: log-spaced over
// [scale/100, 10 scale], scale = u/m for m > 0 and u^2/sigma^2 otherwise.
inline std::vector<double> density_grid(double u, const Diffusion &d, std::size_t points) {
  const double scale = d.drift > 0.0 ? u / d.drift : u * u / (d.sigma * d.sigma);
  std::vector<double> grid(points);
  const double lo = std::log(scale / 100.0), hi = std::log(scale * 10.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::exp(lo + f * (hi - lo));
  }
  return grid;
}

namespace detail {

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("--out: cannot write '" + path + "'");
  out << content;
}

inline std::string num(double x) { return format_number(x); }

struct Options {
  std::string scenario_path;
  std::string out_path;
  std::string emit_scenario;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t workers = 0;
  double horizon = 0.0;
  double n = 0.0;
  double tau = 0.0;
  double u = 0.0;
  double theta = 0.0;
  std::string principle;
  std::size_t replications = 0;
  std::size_t grid_points = kDefaultGridPoints;
};

template <typename T>
T pick(CLI::App *cmd, const char *flag, T given, const std::optional<T> &from_file, const char *field) {
  if (cmd->count(flag) > 0) return given;
  if (from_file) return *from_file;
  throw std::invalid_argument(std::string(flag) + ": required (or set " + field + " in the scenario)");
}

inline std::uint64_t pick_seed(CLI::App *cmd, const Options &o, const ExperimentSettings &ex) {
  if (cmd->count("--seed") > 0) return o.seed;
  return ex.seed.value_or(0);
}

// Emits the report CSV (to --out or stdout) and a text summary.
inline int emit_report(const ExperimentReport &report, const Options &o, std::ostream &out, std::ostream &err) {
  std::ostringstream csv;
  write_report_csv(csv, report);
  if (o.out_path.empty()) {
    out << csv.str();
    write_report_text(err, report);
  } else {
    write_file(o.out_path, csv.str());
    write_report_text(out, report);
  }
  return report.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace detail

// Entry point; args[0] is the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  using detail::Options;
  CLI::App app{"Hawkes-driven insurance risk processes: simulation, analytics, verification"};
  app.require_subcommand(1);
  Options o;

  const auto add_scenario = [&](CLI::App *cmd) {
    cmd->add_option("scenario", o.scenario_path, "scenario file (JSON)")->required();
  };
  const auto add_seed = [&](CLI::App *cmd) { cmd->add_option("--seed", o.seed, "master seed"); };
  const auto add_workers = [&](CLI::App *cmd) {
    cmd->add_option("--workers", o.workers, "worker threads (default $HAWKES_RISK_WORKERS or hardware)");
  };
  const auto add_out = [&](CLI::App *cmd) { cmd->add_option("--out", o.out_path, "output path"); };

  auto *simulate = app.add_subcommand("simulate", "simulate one surplus path; CSV epoch,state,mark,surplus_after");
  add_scenario(simulate);
  add_seed(simulate);
  add_out(simulate);
  simulate->add_option("--horizon", o.horizon, "simulation horizon");
  simulate->add_option("--emit-scenario", o.emit_scenario, "also write the effective scenario to this path");

  auto *analyze = app.add_subcommand("analyze", "asymptotic constants and the net profit condition");
  add_scenario(analyze);
  add_out(analyze);

  auto *prem = app.add_subcommand("premium", "premium rate under a premium principle");
  add_scenario(prem);
  prem->add_option("--principle", o.principle, "expected-value | variance | std-dev");
  prem->add_option("--theta", o.theta, "safety loading > 0");

  auto *ruin = app.add_subcommand("ruin", "finite/ultimate ruin probability and time-to-ruin density table");
  add_scenario(ruin);
  add_out(ruin);
  ruin->add_option("--u", o.u, "initial capital (default: risk.u)");
  ruin->add_option("--tau", o.tau, "time horizon");
  ruin->add_option("--grid-points", o.grid_points, "points in the density table")->check(CLI::PositiveNumber);

  auto *lln = app.add_subcommand("verify-lln", "Monte Carlo check of R(T)/T and N(T)/T limits");
  auto *fclt = app.add_subcommand("verify-fclt", "Monte Carlo check of the diffusion limit");
  auto *vruin = app.add_subcommand("verify-ruin", "Monte Carlo ruin frequency against the diffusion formula");
  for (auto *cmd : {lln, fclt, vruin}) {
    add_scenario(cmd);
    add_seed(cmd);
    add_workers(cmd);
    add_out(cmd);
    cmd->add_option("--replications", o.replications, "number of independent paths");
  }
  lln->add_option("--horizon", o.horizon, "horizon T");
  fclt->add_option("--n", o.n, "scaling index n (t = 1)");
  vruin->add_option("--tau", o.tau, "ruin horizon");

  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const auto &a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const ScenarioFile file = parse_scenario(detail::read_file(o.scenario_path));
    const Scenario &sc = file.scenario;
    const ExperimentSettings &ex = file.experiment;

    if (simulate->parsed()) {
      const double horizon = detail::pick(simulate, "--horizon", o.horizon, ex.horizon, "experiment.horizon");
      const std::uint64_t seed = detail::pick_seed(simulate, o, ex);
      const RiskPath path = simulate_risk_path(sc.hawkes, sc.chain, sc.risk, horizon, seed);
      std::ostringstream csv;
      write_path_csv(csv, path);
      if (o.out_path.empty()) out << csv.str(); else detail::write_file(o.out_path, csv.str());
      if (!o.emit_scenario.empty()) {
        ScenarioFile effective = file;
        effective.experiment.kind = "simulate";
        effective.experiment.horizon = horizon;
        effective.experiment.seed = seed;
        detail::write_file(o.emit_scenario, serialize_scenario(effective));
      }
      err << "claims " << path.claims() << ", final surplus " << detail::num(path.final_surplus) << ", ruin "
          << (path.ruin ? detail::num(*path.ruin) : std::string("none")) << '\n';
      return kExitOk;
    }

    const AsymptoticSummary summary = asymptotic_summary(sc.hawkes, sc.chain, sc.risk);

    if (analyze->parsed()) {
      std::ostringstream s;
      s << "mu_hat," << detail::num(summary.mu_hat) << '\n'
        << "rate," << detail::num(summary.rate) << '\n'
        << "a_star," << detail::num(summary.a_star) << '\n'
        << "sigma_star," << detail::num(summary.sigma_star) << '\n'
        << "drift," << detail::num(summary.drift) << '\n'
        << "sigma," << detail::num(summary.sigma) << '\n'
        << "claim_rate," << detail::num(summary.claim_rate()) << '\n'
        << "net_profit_condition," << (net_profit_condition(summary) ? "true" : "false") << '\n';
      if (o.out_path.empty()) out << s.str(); else detail::write_file(o.out_path, s.str());
      return kExitOk;
    }

    if (prem->parsed()) {
      const std::string name = prem->count("--principle") ? o.principle : ex.principle.value_or("expected-value");
      const double theta = detail::pick(prem, "--theta", o.theta, ex.theta, "experiment.theta");
      const PremiumPrinciple principle(parse_premium_kind(name), theta);
      out << "premium," << detail::num(premium(principle, summary)) << '\n';
      return kExitOk;
    }

    if (ruin->parsed()) {
      const double u = ruin->count("--u") ? o.u : sc.risk.u;
      const double tau = detail::pick(ruin, "--tau", o.tau, ex.tau, "experiment.tau");
      const Diffusion d = summary.diffusion();
      std::ostringstream s;
      s << "ruin_probability," << detail::num(ruin_probability(u, tau, d)) << '\n'
        << "ultimate_ruin_probability," << detail::num(ultimate_ruin_probability(u, d)) << '\n';
      out << s.str();
      if (u > 0.0) {
        std::ostringstream table;
        table << "tau,density,conditional_cdf\n";
        for (double t : density_grid(u, d, o.grid_points))
          table << detail::num(t) << ',' << detail::num(time_to_ruin_density(u, t, d)) << ','
                << detail::num(conditional_ruin_cdf(u, t, d)) << '\n';
        if (o.out_path.empty()) out << '\n' << table.str(); else detail::write_file(o.out_path, table.str());
      } else {
        err << "note: u = 0, time-to-ruin density is degenerate; no table written\n";
      }
      return kExitOk;
    }

    ExperimentConfig cfg{sc, 0.0, 0, detail::pick_seed(app.get_subcommands().front(), o, ex), o.workers};
    const auto reps = [&](CLI::App *cmd) {
      return detail::pick(cmd, "--replications", o.replications, ex.replications, "experiment.replications");
    };
    if (lln->parsed()) {
      cfg.horizon = detail::pick(lln, "--horizon", o.horizon, ex.horizon, "experiment.horizon");
      cfg.replications = reps(lln);
      return detail::emit_report(run_lln_experiment(cfg), o, out, err);
    }
    if (fclt->parsed()) {
      cfg.horizon = detail::pick(fclt, "--n", o.n, ex.n, "experiment.n");
      cfg.replications = reps(fclt);
      return detail::emit_report(run_fclt_experiment(cfg), o, out, err);
    }
    if (vruin->parsed()) {
      const double tau = detail::pick(vruin, "--tau", o.tau, ex.tau, "experiment.tau");
      cfg.replications = reps(vruin);
      return detail::emit_report(estimate_ruin_probability(cfg, tau), o, out, err);
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace hawkes_risk::cli

#endif  // HAWKES_RISK_CLI_HPP_
