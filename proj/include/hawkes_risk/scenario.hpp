#ifndef HAWKES_RISK_SCENARIO_HPP_
#define HAWKES_RISK_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hawkes_risk/analytics.hpp"
#include "hawkes_risk/montecarlo.hpp"

namespace hawkes_risk {

// Raised for any malformed scenario document; the message names the field.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Optional run settings carried by a scenario file.
struct ExperimentSettings {
  std::optional<std::string> kind;
  std::optional<double> horizon;
  std::optional<double> n;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;
  std::optional<double> theta;
  std::optional<std::string> principle;

  bool empty() const {
    return !kind && !horizon && !n && !replications && !seed && !tau && !theta && !principle;
  }
  bool operator==(const ExperimentSettings &) const = default;
};

struct ScenarioFile {
  Scenario scenario;
  ExperimentSettings experiment;
};

inline PremiumKind parse_premium_kind(const std::string &name) {
  if (name == "expected-value") return PremiumKind::kExpectedValue;
  if (name == "variance") return PremiumKind::kVariance;
  if (name == "std-dev") return PremiumKind::kStdDev;
  throw ScenarioError("principle: expected one of expected-value, variance, std-dev; got '" + name + "'");
}

namespace scenario_detail {

using Json = nlohmann::ordered_json;

inline void reject_unknown(const Json &obj, const std::string &path, std::initializer_list<const char *> allowed) {
  if (!obj.is_object()) throw ScenarioError(path + ": expected an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto &[key, value] : obj.items()) {
    if (!names.count(key)) throw ScenarioError((path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

inline const Json &require(const Json &obj, const std::string &path, const char *key) {
  if (!obj.contains(key)) throw ScenarioError(path + "." + key + ": missing required field");
  return obj.at(key);
}

inline double number(const Json &v, const std::string &path) {
  if (!v.is_number()) throw ScenarioError(path + ": expected a number");
  return v.get<double>();
}

inline std::uint64_t unsigned_integer(const Json &v, const std::string &path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ScenarioError(path + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string text(const Json &v, const std::string &path) {
  if (!v.is_string()) throw ScenarioError(path + ": expected a string");
  return v.get<std::string>();
}

inline Eigen::VectorXd vector(const Json &v, const std::string &path) {
  if (!v.is_array() || v.empty()) throw ScenarioError(path + ": expected a non-empty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline Eigen::MatrixXd matrix(const Json &v, const std::string &path) {
  if (!v.is_array() || v.empty()) throw ScenarioError(path + ": expected a non-empty array of rows");
  const std::size_t rows = v.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const Eigen::VectorXd row = vector(v[i], row_path);
    if (static_cast<std::size_t>(row.size()) != rows) throw ScenarioError(row_path + ": matrix must be square");
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

// Re-throws domain validation errors with the section prefix.
template <typename Fn>
auto in_section(const std::string &section, Fn &&fn) {
  try {
    return fn();
  } catch (const ScenarioError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    std::string msg = e.what();
    // Domain messages already start with "<field>:"; qualify them.
    if (section.empty() || msg.rfind(section + ".", 0) == 0) throw ScenarioError(msg);
    throw ScenarioError(section + "." + msg);
  }
}

inline KernelSpec parse_kernel(const Json &k) {
  reject_unknown(k, "hawkes.kernel", {"type", "params"});
  const std::string type = text(require(k, "hawkes.kernel", "type"), "hawkes.kernel.type");
  const Json &params = require(k, "hawkes.kernel", "params");
  const std::string pp = "hawkes.kernel.params";
  if (type == "exponential") {
    reject_unknown(params, pp, {"alpha", "beta"});
    const double alpha = number(require(params, pp, "alpha"), pp + ".alpha");
    const double beta = number(require(params, pp, "beta"), pp + ".beta");
    return in_section("hawkes", [&] { return KernelSpec::exponential(alpha, beta); });
  }
  if (type == "power-law") {
    reject_unknown(params, pp, {"k", "c", "p"});
    const double kk = number(require(params, pp, "k"), pp + ".k");
    const double c = number(require(params, pp, "c"), pp + ".c");
    const double p = number(require(params, pp, "p"), pp + ".p");
    return in_section("hawkes", [&] { return KernelSpec::power_law(kk, c, p); });
  }
  throw ScenarioError("hawkes.kernel.type: expected 'exponential' or 'power-law', got '" + type + "'");
}

inline HawkesParams parse_hawkes(const Json &h) {
  reject_unknown(h, "hawkes", {"lambda", "lambda0", "kernel"});
  const double lambda = number(require(h, "hawkes", "lambda"), "hawkes.lambda");
  std::optional<double> lambda0;
  if (h.contains("lambda0")) lambda0 = number(h.at("lambda0"), "hawkes.lambda0");
  KernelSpec kernel = parse_kernel(require(h, "hawkes", "kernel"));
  return in_section("", [&] { return HawkesParams(lambda, kernel, lambda0); });
}

inline MarkChain parse_chain(const Json &c) {
  reject_unknown(c, "chain", {"P", "a", "init"});
  Eigen::MatrixXd P = matrix(require(c, "chain", "P"), "chain.P");
  Eigen::VectorXd a = vector(require(c, "chain", "a"), "chain.a");
  Eigen::VectorXd init;
  if (c.contains("init")) {
    init = vector(c.at("init"), "chain.init");
  } else {
    init = in_section("chain", [&] { return stationary_distribution(P); });
  }
  return in_section("", [&] { return MarkChain(P, a, init); });
}

inline RiskParams parse_risk(const Json &r) {
  reject_unknown(r, "risk", {"u", "c"});
  const double u = number(require(r, "risk", "u"), "risk.u");
  const double c = number(require(r, "risk", "c"), "risk.c");
  return in_section("", [&] { return RiskParams(u, c); });
}

inline ExperimentSettings parse_experiment(const Json &e) {
  reject_unknown(e, "experiment", {"kind", "horizon", "n", "replications", "seed", "tau", "theta", "principle"});
  ExperimentSettings s;
  if (e.contains("kind")) {
    s.kind = text(e.at("kind"), "experiment.kind");
    if (*s.kind != "simulate" && *s.kind != "lln" && *s.kind != "fclt" && *s.kind != "ruin")
      throw ScenarioError("experiment.kind: expected one of simulate, lln, fclt, ruin");
  }
  if (e.contains("horizon")) s.horizon = number(e.at("horizon"), "experiment.horizon");
  if (e.contains("n")) s.n = number(e.at("n"), "experiment.n");
  if (e.contains("replications"))
    s.replications = static_cast<std::size_t>(unsigned_integer(e.at("replications"), "experiment.replications"));
  if (e.contains("seed")) s.seed = unsigned_integer(e.at("seed"), "experiment.seed");
  if (e.contains("tau")) s.tau = number(e.at("tau"), "experiment.tau");
  if (e.contains("theta")) s.theta = number(e.at("theta"), "experiment.theta");
  if (e.contains("principle")) {
    s.principle = text(e.at("principle"), "experiment.principle");
    try {
      parse_premium_kind(*s.principle);
    } catch (const ScenarioError &err) {
      throw ScenarioError(std::string("experiment.") + err.what());
    }
  }
  return s;
}

inline Json vector_json(const Eigen::VectorXd &v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace scenario_detail

inline ScenarioFile parse_scenario(const std::string &document) {
  using scenario_detail::Json;
  Json root;
  try {
    root = Json::parse(document);
  } catch (const nlohmann::json::parse_error &e) {
    throw ScenarioError(std::string("scenario: malformed document: ") + e.what());
  }
  scenario_detail::reject_unknown(root, "", {"hawkes", "chain", "risk", "experiment"});
  HawkesParams hawkes = scenario_detail::parse_hawkes(scenario_detail::require(root, "scenario", "hawkes"));
  MarkChain chain = scenario_detail::parse_chain(scenario_detail::require(root, "scenario", "chain"));
  RiskParams risk = scenario_detail::parse_risk(scenario_detail::require(root, "scenario", "risk"));
  ExperimentSettings experiment;
  if (root.contains("experiment")) experiment = scenario_detail::parse_experiment(root.at("experiment"));
  return ScenarioFile{Scenario{std::move(hawkes), std::move(chain), risk}, experiment};
}

inline std::string serialize_scenario(const ScenarioFile &file) {
  using scenario_detail::Json;
  const Scenario &sc = file.scenario;
  Json root;
  Json hawkes;
  hawkes["lambda"] = sc.hawkes.lambda();
  if (sc.hawkes.has_lambda0()) hawkes["lambda0"] = sc.hawkes.lambda0();
  Json kernel;
  if (const auto *e = std::get_if<ExponentialKernel>(&sc.hawkes.kernel().variant())) {
    kernel["type"] = "exponential";
    kernel["params"] = Json{{"alpha", e->alpha}, {"beta", e->beta}};
  } else {
    const auto &p = std::get<PowerLawKernel>(sc.hawkes.kernel().variant());
    kernel["type"] = "power-law";
    kernel["params"] = Json{{"k", p.k}, {"c", p.c}, {"p", p.p}};
  }
  hawkes["kernel"] = kernel;
  root["hawkes"] = hawkes;

  Json chain;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < sc.chain.transition().rows(); ++i)
    rows.push_back(scenario_detail::vector_json(sc.chain.transition().row(i).transpose()));
  chain["P"] = rows;
  chain["a"] = scenario_detail::vector_json(sc.chain.marks());
  chain["init"] = scenario_detail::vector_json(sc.chain.initial());
  root["chain"] = chain;
  root["risk"] = Json{{"u", sc.risk.u}, {"c", sc.risk.c}};

  const ExperimentSettings &ex = file.experiment;
  if (!ex.empty()) {
    Json e = Json::object();
    if (ex.kind) e["kind"] = *ex.kind;
    if (ex.horizon) e["horizon"] = *ex.horizon;
    if (ex.n) e["n"] = *ex.n;
    if (ex.replications) e["replications"] = *ex.replications;
    if (ex.seed) e["seed"] = *ex.seed;
    if (ex.tau) e["tau"] = *ex.tau;
    if (ex.theta) e["theta"] = *ex.theta;
    if (ex.principle) e["principle"] = *ex.principle;
    root["experiment"] = e;
  }
  return root.dump(2) + "\n";
}

// Field-by-field equality of two scenario files (bitwise on doubles).
inline bool same_configuration(const ScenarioFile &x, const ScenarioFile &y) {
  const Scenario &a = x.scenario;
  const Scenario &b = y.scenario;
  const auto same_kernel = [](const KernelSpec &p, const KernelSpec &q) {
    if (p.variant().index() != q.variant().index()) return false;
    if (const auto *e = std::get_if<ExponentialKernel>(&p.variant())) {
      const auto &f = std::get<ExponentialKernel>(q.variant());
      return e->alpha == f.alpha && e->beta == f.beta;
    }
    const auto &e = std::get<PowerLawKernel>(p.variant());
    const auto &f = std::get<PowerLawKernel>(q.variant());
    return e.k == f.k && e.c == f.c && e.p == f.p;
  };
  return a.hawkes.lambda() == b.hawkes.lambda() && a.hawkes.has_lambda0() == b.hawkes.has_lambda0() &&
         a.hawkes.lambda0() == b.hawkes.lambda0() && same_kernel(a.hawkes.kernel(), b.hawkes.kernel()) &&
         a.chain.transition() == b.chain.transition() && a.chain.marks() == b.chain.marks() &&
         a.chain.initial() == b.chain.initial() && a.risk.u == b.risk.u && a.risk.c == b.risk.c &&
         x.experiment == y.experiment;
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_SCENARIO_HPP_
