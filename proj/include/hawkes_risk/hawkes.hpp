#ifndef HAWKES_RISK_HAWKES_HPP_
#define HAWKES_RISK_HAWKES_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hawkes_risk/kernel.hpp"
#include "hawkes_risk/random.hpp"

namespace hawkes_risk {

// One-dimensional linear Hawkes process
//   lambda(t) = lambda + sum_{t_i < t} mu(t - t_i)
// with an optional initial intensity lambda0 for the exponential kernel, in
// which case the excess (lambda0 - lambda) decays at the kernel rate beta.
class HawkesParams {
 public:
  HawkesParams(double lambda, KernelSpec kernel, std::optional<double> lambda0 = std::nullopt)
      : lambda_(lambda), kernel_(std::move(kernel)), lambda0_(lambda0.value_or(lambda)),
        has_lambda0_(lambda0.has_value()) {
    if (!(lambda_ > 0.0 && std::isfinite(lambda_)))
      throw std::invalid_argument("hawkes.lambda: background intensity must be finite and > 0");
    if (has_lambda0_) {
      if (!kernel_.is_exponential())
        throw std::invalid_argument("hawkes.lambda0: initial intensity requires an exponential kernel");
      if (!(lambda0_ >= lambda_ && std::isfinite(lambda0_)))
        throw std::invalid_argument("hawkes.lambda0: initial intensity must be finite and >= lambda");
    }
  }

  double lambda() const { return lambda_; }
  const KernelSpec &kernel() const { return kernel_; }
  // Defaults to lambda (stationary start) when not given.
  double lambda0() const { return lambda0_; }
  bool has_lambda0() const { return has_lambda0_; }

  double branching_ratio() const { return kernel_.branching_ratio(); }
  // Long-run event rate lambda / (1 - mu_hat).
  double stationary_rate() const { return lambda_ / (1.0 - branching_ratio()); }

  // Contribution of the decaying initial excess at time t (exponential only).
  double initial_excess(double t) const {
    if (lambda0_ == lambda_) return 0.0;
    const double beta = std::get<ExponentialKernel>(kernel_.variant()).beta;
    return (lambda0_ - lambda_) * std::exp(-beta * t);
  }
  // Integral of initial_excess over [0, t].
  double initial_excess_integral(double t) const {
    if (lambda0_ == lambda_ || t <= 0.0) return 0.0;
    const double beta = std::get<ExponentialKernel>(kernel_.variant()).beta;
    return -(lambda0_ - lambda_) * std::expm1(-beta * t) / beta;
  }

 private:
  double lambda_;
  KernelSpec kernel_;
  double lambda0_;
  bool has_lambda0_;
};

// Event epochs 0 < t_1 < t_2 < ... <= horizon.
class EventStream {
 public:
  EventStream() = default;
  explicit EventStream(double horizon) : horizon_(horizon) { check_horizon(); }
  EventStream(std::vector<double> times, double horizon) : times_(std::move(times)), horizon_(horizon) {
    check_horizon();
    double prev = 0.0;
    for (double t : times_) {
      if (!(t > prev)) throw std::invalid_argument("event stream: times must be strictly increasing and > 0");
      prev = t;
    }
    if (!times_.empty() && times_.back() > horizon_)
      throw std::invalid_argument("event stream: event after horizon");
  }

  std::span<const double> times() const { return times_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double operator[](std::size_t i) const { return times_[i]; }

  // N(t): number of events with t_i <= t.
  std::size_t count_until(double t) const {
    std::size_t lo = 0, hi = times_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (times_[mid] <= t) lo = mid + 1; else hi = mid;
    }
    return lo;
  }

 private:
  void check_horizon() const {
    if (!(horizon_ >= 0.0 && std::isfinite(horizon_)))
      throw std::invalid_argument("event stream: horizon must be finite and >= 0");
  }

  std::vector<double> times_;
  double horizon_ = 0.0;
};

// Conditional intensity at t; events strictly before t contribute.
inline double intensity_at(const HawkesParams &params, const EventStream &history, double t) {
  double value = params.lambda() + params.initial_excess(t);
  for (double ti : history.times()) {
    if (ti >= t) break;
    value += params.kernel()(t - ti);
  }
  return value;
}

// Lambda(t) = integral of the intensity over [0, t].
inline double compensator(const HawkesParams &params, const EventStream &history, double t) {
  if (t <= 0.0) return 0.0;
  double value = params.lambda() * t + params.initial_excess_integral(t);
  for (double ti : history.times()) {
    if (ti >= t) break;
    value += params.kernel().integral(t - ti);
  }
  return value;
}

// Lambda(t_i) for every event of the stream. O(n) for the exponential kernel,
// O(n^2) for the power law.
inline std::vector<double> compensator_at_events(const HawkesParams &params, const EventStream &stream) {
  const auto times = stream.times();
  std::vector<double> out(times.size());
  if (const auto *e = std::get_if<ExponentialKernel>(&params.kernel().variant())) {
    // decayed = sum_{j<i} exp(-beta (t_i - t_j))
    double decayed = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      if (i > 0) decayed = (decayed + 1.0) * std::exp(-e->beta * (t - prev));
      out[i] = params.lambda() * t + params.initial_excess_integral(t) +
               (e->alpha / e->beta) * (static_cast<double>(i) - decayed);
      prev = t;
    }
    return out;
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    double value = params.lambda() * t;
    for (std::size_t j = 0; j < i; ++j) value += params.kernel().integral(t - times[j]);
    out[i] = value;
  }
  return out;
}

// Lambda(t_i) - Lambda(t_{i-1}); Exp(1)-distributed under the model.
inline std::vector<double> rescaled_interarrivals(const HawkesParams &params, const EventStream &stream) {
  std::vector<double> lam = compensator_at_events(params, stream);
  double prev = 0.0;
  for (double &x : lam) {
    const double cur = x;
    x = cur - prev;
    prev = cur;
  }
  return lam;
}

namespace detail {

inline double advance(double t, double step) {
  const double next = t + step;
  return next > t ? next : std::nextafter(t, INFINITY);
}

inline std::vector<double> thin_exponential(const HawkesParams &params, const ExponentialKernel &k,
                                            double horizon, CounterRng &rng) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(params.stationary_rate() * horizon * 1.1) + 16);
  double t = 0.0;
  // Everything above the background level; decays at rate beta between events.
  double excitation = params.lambda0() - params.lambda();
  for (;;) {
    const double bound = params.lambda() + excitation;
    const double wait = rng.standard_exponential() / bound;
    const double candidate = advance(t, wait);
    if (candidate > horizon) break;
    excitation *= std::exp(-k.beta * (candidate - t));
    t = candidate;
    if (rng.uniform() * bound <= params.lambda() + excitation) {
      times.push_back(t);
      excitation += k.alpha;
    }
  }
  return times;
}

inline std::vector<double> thin_general(const HawkesParams &params, double horizon, CounterRng &rng) {
  std::vector<double> times;
  double t = 0.0;
  const double jump = params.kernel().jump();
  // Intensity just after t is an upper bound until the next event because
  // both kernels are non-increasing.
  double bound = params.lambda0();
  for (;;) {
    const double candidate = advance(t, rng.standard_exponential() / bound);
    if (candidate > horizon) break;
    t = candidate;
    double current = params.lambda() + params.initial_excess(t);
    for (double ti : times) current += params.kernel()(t - ti);
    if (rng.uniform() * bound <= current) {
      times.push_back(t);
      bound = current + jump;
    } else {
      bound = current;
    }
  }
  return times;
}

}  // namespace detail

// Ogata thinning with the current intensity as the local bound.
inline EventStream simulate_hawkes(const HawkesParams &params, double horizon, CounterRng &rng) {
  if (!(horizon >= 0.0 && std::isfinite(horizon)))
    throw std::invalid_argument("simulate_hawkes: horizon must be finite and >= 0");
  if (horizon == 0.0) return EventStream(0.0);
  std::vector<double> times;
  if (const auto *e = std::get_if<ExponentialKernel>(&params.kernel().variant()))
    times = detail::thin_exponential(params, *e, horizon, rng);
  else
    times = detail::thin_general(params, horizon, rng);
  return EventStream(std::move(times), horizon);
}

inline EventStream simulate_hawkes(const HawkesParams &params, double horizon, std::uint64_t seed) {
  CounterRng rng(StreamId{seed, 0, StreamRole::kArrivals});
  return simulate_hawkes(params, horizon, rng);
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_HAWKES_HPP_
