#ifndef HAWKES_RISK_ANALYTICS_HPP_
#define HAWKES_RISK_ANALYTICS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hawkes_risk/hawkes.hpp"
#include "hawkes_risk/markov_chain.hpp"
#include "hawkes_risk/risk_process.hpp"

namespace hawkes_risk {

// Standard normal CDF through erfc; absolute error well below 1e-12.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double log_normal_cdf(double x) {
  // erfc keeps full relative precision down to about -37.
  if (x > -37.0) return std::log(normal_cdf(x));
  // log(0.5 erfc(z)) with the asymptotic factor pulled out to avoid underflow:
  // erfc(z) = exp(-z^2) * erfcx(z), erfcx(z) ~ 1/(z sqrt(pi)) * series.
  const double z = -x / std::numbers::sqrt2;
  const double z2 = z * z;
  double series = 1.0, term = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= -(2.0 * k - 1.0) / (2.0 * z2);
    series += term;
  }
  return std::log(0.5) - z2 - std::log(z * std::sqrt(std::numbers::pi)) + std::log(series);
}

// Brownian motion with drift: D(t) = m t + sigma W(t).
struct Diffusion {
  double drift = 0.0;
  double sigma = 0.0;
};

struct AsymptoticSummary {
  double mu_hat = 0.0;
  double rate = 0.0;        // lambda / (1 - mu_hat)
  double a_star = 0.0;
  double sigma_star = 0.0;
  double drift = 0.0;       // c - a* rate
  double sigma = 0.0;       // sigma* sqrt(rate)
  double premium_rate = 0.0;

  // Long-run claim outflow a* lambda / (1 - mu_hat).
  double claim_rate() const { return a_star * rate; }
  Diffusion diffusion() const { return {drift, sigma}; }
};

inline AsymptoticSummary asymptotic_summary(const HawkesParams &h, const MarkChain &chain, const RiskParams &r) {
  const MarkStats marks = mark_stats(chain);
  AsymptoticSummary s;
  s.mu_hat = h.branching_ratio();
  s.rate = h.lambda() / (1.0 - s.mu_hat);
  s.a_star = marks.a_star;
  s.sigma_star = marks.sigma_star;
  s.premium_rate = r.c;
  s.drift = r.c - s.a_star * s.rate;
  s.sigma = s.sigma_star * std::sqrt(s.rate);
  return s;
}

// Strict: premium must exceed the asymptotic claim rate.
inline bool net_profit_condition(const AsymptoticSummary &s) { return s.drift > 0.0; }

enum class PremiumKind { kExpectedValue, kVariance, kStdDev };

struct PremiumPrinciple {
  PremiumKind kind = PremiumKind::kExpectedValue;
  double theta = 0.0;

  PremiumPrinciple(PremiumKind k, double loading) : kind(k), theta(loading) {
    if (!(theta > 0.0 && std::isfinite(theta)))
      throw std::invalid_argument("premium.theta: safety loading must be finite and > 0");
  }
};

// Long-run rates stand in for E[S_t]/t and Var[S_t/t]: a* lambda/(1-mu_hat)
// and sigma^2 respectively.
inline double premium(const PremiumPrinciple &p, const AsymptoticSummary &s) {
  const double fair = s.claim_rate();
  switch (p.kind) {
    case PremiumKind::kExpectedValue: return (1.0 + p.theta) * fair;
    case PremiumKind::kVariance: return fair + p.theta * s.sigma * s.sigma;
    case PremiumKind::kStdDev: return fair + p.theta * s.sigma;
  }
  return fair;
}

namespace detail {

inline double clamp_probability(double p) {
  if (std::isnan(p)) return p;
  return std::clamp(p, 0.0, 1.0);
}

inline void require_diffusive(const Diffusion &d, const char *what) {
  if (!(d.sigma > 0.0 && std::isfinite(d.sigma)))
    throw std::invalid_argument(std::string(what) + ": sigma must be > 0 (diffusion approximation undefined)");
  if (!std::isfinite(d.drift)) throw std::invalid_argument(std::string(what) + ": drift must be finite");
}

inline void require_capital(double u, const char *what) {
  if (!(u >= 0.0 && std::isfinite(u))) throw std::invalid_argument(std::string(what) + ": u must be finite and >= 0");
}

inline void require_horizon(double tau, const char *what) {
  if (!(tau > 0.0)) throw std::invalid_argument(std::string(what) + ": tau must be > 0");
}

// exp(log_weight) * Phi(x) without overflow in either factor.
inline double weighted_normal_cdf(double log_weight, double x) {
  const double lp = log_normal_cdf(x);
  if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::exp(log_weight + lp);
}

}  // namespace detail

// psi(u, tau): probability that u + D(t) drops below 0 before tau.
inline double ruin_probability(double u, double tau, const Diffusion &d) {
  detail::require_diffusive(d, "ruin_probability");
  detail::require_capital(u, "ruin_probability");
  detail::require_horizon(tau, "ruin_probability");
  const double m = d.drift;
  const double scale = d.sigma * std::sqrt(tau);
  const double log_weight = -2.0 * m * u / (d.sigma * d.sigma);
  const double p = normal_cdf(-(u + m * tau) / scale) + detail::weighted_normal_cdf(log_weight, -(u - m * tau) / scale);
  return detail::clamp_probability(p);
}

// psi(u) = exp(-2 m u / sigma^2), and 1 whenever m <= 0.
inline double ultimate_ruin_probability(double u, const Diffusion &d) {
  detail::require_diffusive(d, "ultimate_ruin_probability");
  detail::require_capital(u, "ultimate_ruin_probability");
  if (d.drift <= 0.0) return 1.0;
  return detail::clamp_probability(std::exp(-2.0 * d.drift * u / (d.sigma * d.sigma)));
}

// P(T_u < tau | T_u < inf) = psi(u, tau) / psi(u).
inline double conditional_ruin_cdf(double u, double tau, const Diffusion &d) {
  detail::require_diffusive(d, "conditional_ruin_cdf");
  detail::require_capital(u, "conditional_ruin_cdf");
  detail::require_horizon(tau, "conditional_ruin_cdf");
  const double m = d.drift;
  if (m <= 0.0) return ruin_probability(u, tau, d);
  const double scale = d.sigma * std::sqrt(tau);
  const double log_weight = 2.0 * m * u / (d.sigma * d.sigma);
  const double p = detail::weighted_normal_cdf(log_weight, -(u + m * tau) / scale) + normal_cdf(-(u - m * tau) / scale);
  return detail::clamp_probability(p);
}

// Density of the time to ruin given ruin (inverse Gaussian with mean u/m).
inline double time_to_ruin_density(double u, double tau, const Diffusion &d) {
  detail::require_diffusive(d, "time_to_ruin_density");
  detail::require_capital(u, "time_to_ruin_density");
  if (!(u > 0.0)) throw std::invalid_argument("time_to_ruin_density: u must be > 0 (density degenerates at u = 0)");
  detail::require_horizon(tau, "time_to_ruin_density");
  const double m = d.drift;
  const double s2 = d.sigma * d.sigma;
  const double dev = u - m * tau;
  return u / (d.sigma * std::sqrt(2.0 * std::numbers::pi)) * std::pow(tau, -1.5) * std::exp(-dev * dev / (2.0 * s2 * tau));
}

inline double ruin_probability(double u, double tau, const AsymptoticSummary &s) {
  return ruin_probability(u, tau, s.diffusion());
}
inline double ultimate_ruin_probability(double u, const AsymptoticSummary &s) {
  return ultimate_ruin_probability(u, s.diffusion());
}
inline double conditional_ruin_cdf(double u, double tau, const AsymptoticSummary &s) {
  return conditional_ruin_cdf(u, tau, s.diffusion());
}
inline double time_to_ruin_density(double u, double tau, const AsymptoticSummary &s) {
  return time_to_ruin_density(u, tau, s.diffusion());
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_ANALYTICS_HPP_
