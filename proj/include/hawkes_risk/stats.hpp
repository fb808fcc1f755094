#ifndef HAWKES_RISK_STATS_HPP_
#define HAWKES_RISK_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace hawkes_risk::stats {

// Pairwise (cascade) summation in index order. The result depends only on the
// values and their order, never on how they were produced.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double fourth = 0.0;    // fourth central moment (biased)

  double std_error() const {
    return n > 1 ? std::sqrt(variance / static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
  }
  // Standard error of the sample variance, from the fourth moment.
  double variance_std_error() const {
    if (n < 4) return std::numeric_limits<double>::quiet_NaN();
    const double nd = static_cast<double>(n);
    const double s4 = variance * variance;
    return std::sqrt(std::max(fourth - s4 * (nd - 3.0) / (nd - 1.0), 0.0) / nd);
  }
};

inline Moments moments(std::span<const double> x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  const double nd = static_cast<double>(x.size());
  m.mean = pairwise_sum(x) / nd;
  std::vector<double> sq(x.size()), qu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - m.mean;
    sq[i] = d * d;
    qu[i] = sq[i] * sq[i];
  }
  m.variance = x.size() > 1 ? pairwise_sum(sq) / (nd - 1.0) : std::numeric_limits<double>::quiet_NaN();
  m.fourth = pairwise_sum(qu) / nd;
  return m;
}

// sup |F_n(x) - F(x)| for a continuous reference CDF.
template <typename Cdf>
double ks_statistic(std::span<const double> samples, Cdf &&cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
  }
  return d;
}

// Kolmogorov survival function Q(x) = P(K > x).
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Small-x form: 1 - sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

// Asymptotic p-value of the one-sample KS statistic, with Stephens' finite-n
// argument correction.
inline double ks_pvalue(double d, std::size_t n) {
  if (n == 0) return 1.0;
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

inline double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

}  // namespace hawkes_risk::stats

#endif  // HAWKES_RISK_STATS_HPP_
