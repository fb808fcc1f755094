#ifndef HAWKES_RISK_RISK_PROCESS_HPP_
#define HAWKES_RISK_RISK_PROCESS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes_risk/hawkes.hpp"
#include "hawkes_risk/markov_chain.hpp"
#include "hawkes_risk/random.hpp"

namespace hawkes_risk {

struct RiskParams {
  double u = 0.0;  // initial capital
  double c = 0.0;  // premium rate

  RiskParams() = default;
  RiskParams(double capital, double premium_rate) : u(capital), c(premium_rate) {
    if (!(u >= 0.0 && std::isfinite(u))) throw std::invalid_argument("risk.u: initial capital must be finite and >= 0");
    if (!(c >= 0.0 && std::isfinite(c))) throw std::invalid_argument("risk.c: premium rate must be finite and >= 0");
  }
};

// S_t = s0 + sum_{k <= N(t)} marks[k]. Events at exactly t are included.
inline double gchp_value(const EventStream &events, std::span<const double> marks, double t, double s0 = 0.0) {
  if (marks.size() != events.size())
    throw std::invalid_argument("gchp_value: marks and events differ in length");
  const std::size_t n = events.count_until(t);
  double sum = s0;
  for (std::size_t k = 0; k < n; ++k) sum += marks[k];
  return sum;
}

// One realisation of R(t) = u + c t - sum_{k <= N(t)} a(X_k) on [0, horizon].
struct RiskPath {
  EventStream events;
  std::vector<std::size_t> states;
  std::vector<double> marks;
  std::vector<double> surplus_after;  // R(t_k), just after claim k
  std::optional<double> ruin;
  double initial_capital = 0.0;
  double premium_rate = 0.0;
  double final_surplus = 0.0;  // R(horizon)

  double horizon() const { return events.horizon(); }
  std::size_t claims() const { return events.size(); }

  // R(t) for 0 <= t <= horizon.
  double surplus_at(double t) const {
    const std::size_t n = events.count_until(t);
    double paid = 0.0;
    for (std::size_t k = 0; k < n; ++k) paid += marks[k];
    return initial_capital + premium_rate * t - paid;
  }
};

// First claim epoch with negative post-claim surplus. Between claims the
// surplus only grows (c >= 0), so checking claim epochs is exact.
inline std::optional<double> ruin_time(const RiskPath &path) {
  for (std::size_t k = 0; k < path.surplus_after.size(); ++k)
    if (path.surplus_after[k] < 0.0) return path.events[k];
  return std::nullopt;
}

inline RiskPath assemble_risk_path(EventStream events, std::vector<std::size_t> states, const MarkChain &chain,
                                   const RiskParams &risk) {
  if (states.size() != events.size())
    throw std::invalid_argument("assemble_risk_path: states and events differ in length");
  RiskPath path;
  path.initial_capital = risk.u;
  path.premium_rate = risk.c;
  path.marks.resize(states.size());
  path.surplus_after.resize(states.size());
  double paid = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double a = chain.mark(states[k]);
    path.marks[k] = a;
    paid += a;
    path.surplus_after[k] = risk.u + risk.c * events[k] - paid;
  }
  path.final_surplus = risk.u + risk.c * events.horizon() - paid;
  path.events = std::move(events);
  path.states = std::move(states);
  path.ruin = ruin_time(path);
  return path;
}

// Arrivals and marks come from independent substreams of (seed, path_index).
inline RiskPath simulate_risk_path(const HawkesParams &hawkes, const MarkChain &chain, const RiskParams &risk,
                                   double horizon, std::uint64_t seed, std::uint64_t path_index = 0) {
  CounterRng arrivals(StreamId{seed, path_index, StreamRole::kArrivals});
  CounterRng marks(StreamId{seed, path_index, StreamRole::kMarks});
  EventStream events = simulate_hawkes(hawkes, horizon, arrivals);
  std::vector<std::size_t> states = simulate_chain(chain, events.size(), marks);
  return assemble_risk_path(std::move(events), std::move(states), chain, risk);
}

// CSV dump: epoch,state,mark,surplus_after (states 0-based).
inline void write_path_csv(std::ostream &os, const RiskPath &path) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "epoch,state,mark,surplus_after\n" << std::setprecision(9);
  for (std::size_t k = 0; k < path.claims(); ++k)
    os << path.events[k] << ',' << path.states[k] << ',' << path.marks[k] << ',' << path.surplus_after[k] << '\n';
  os.flags(flags);
  os.precision(prec);
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_RISK_PROCESS_HPP_
