#ifndef HAWKES_RISK_MARKOV_CHAIN_HPP_
#define HAWKES_RISK_MARKOV_CHAIN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hawkes_risk/random.hpp"

namespace hawkes_risk {

// Row-stochastic tolerance for P and init.
inline constexpr double kStochasticTolerance = 1e-12;
// Relative pivot threshold below which a system is declared singular.
inline constexpr double kSingularityThreshold = 1e-10;

// Unique stationary distribution of a row-stochastic matrix. Solves
// pi (P - I) = 0 with one balance equation replaced by sum(pi) = 1; the system
// is nonsingular exactly when the stationary distribution is unique.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd &P) {
  const Eigen::Index n = P.rows();
  if (n == 0 || P.cols() != n) throw std::invalid_argument("chain.P: must be a non-empty square matrix");
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(kSingularityThreshold);
  if (!lu.isInvertible()) {
    throw std::invalid_argument(
        "chain.P: chain is not ergodic (stationary distribution is not unique; rank " +
        std::to_string(lu.rank()) + " of " + std::to_string(n) + ")");
  }
  Eigen::VectorXd pi = lu.solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < -1e-10) throw std::invalid_argument("chain.P: stationary solution has negative mass");
    pi(i) = std::max(pi(i), 0.0);
  }
  return pi / pi.sum();
}

// Embedded discrete-time chain X_1, X_2, ... sampled at claim epochs, with a
// bounded mark function a(i).
class MarkChain {
 public:
  MarkChain(Eigen::MatrixXd transition, Eigen::VectorXd marks, Eigen::VectorXd initial)
      : P_(std::move(transition)), a_(std::move(marks)), init_(std::move(initial)) {
    const Eigen::Index n = P_.rows();
    if (n < 1 || P_.cols() != n) throw std::invalid_argument("chain.P: must be a non-empty square matrix");
    if (a_.size() != n) throw std::invalid_argument("chain.a: length must equal the number of states");
    if (init_.size() != n) throw std::invalid_argument("chain.init: length must equal the number of states");
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!(P_(i, j) >= 0.0 && std::isfinite(P_(i, j))))
          throw std::invalid_argument("chain.P: entries must be finite and >= 0");
      }
      if (std::abs(P_.row(i).sum() - 1.0) > kStochasticTolerance)
        throw std::invalid_argument("chain.P: row " + std::to_string(i) + " does not sum to 1");
      if (!std::isfinite(a_(i))) throw std::invalid_argument("chain.a: marks must be finite");
      if (!(init_(i) >= 0.0)) throw std::invalid_argument("chain.init: entries must be >= 0");
    }
    if (std::abs(init_.sum() - 1.0) > kStochasticTolerance)
      throw std::invalid_argument("chain.init: does not sum to 1");
    pi_ = stationary_distribution(P_);

    cumulative_.resize(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        acc += P_(i, j);
        cumulative_[static_cast<std::size_t>(i * n + j)] = acc;
      }
    }
    init_cumulative_.resize(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) init_cumulative_[static_cast<std::size_t>(i)] = (acc += init_(i));
  }

  // Chain whose every row equals `distribution`: i.i.d. marks.
  static MarkChain iid(const Eigen::VectorXd &distribution, Eigen::VectorXd marks) {
    const Eigen::Index n = distribution.size();
    Eigen::MatrixXd P(n, n);
    for (Eigen::Index i = 0; i < n; ++i) P.row(i) = distribution.transpose();
    return MarkChain(std::move(P), std::move(marks), distribution);
  }

  std::size_t states() const { return static_cast<std::size_t>(P_.rows()); }
  const Eigen::MatrixXd &transition() const { return P_; }
  const Eigen::VectorXd &marks() const { return a_; }
  const Eigen::VectorXd &initial() const { return init_; }
  const Eigen::VectorXd &stationary() const { return pi_; }

  double mark(std::size_t state) const { return a_(static_cast<Eigen::Index>(state)); }

  // Index of the first entry of a cumulative row exceeding u.
  static std::size_t pick(const double *cdf, std::size_t n, double u) {
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (u < cdf[j]) return j;
    return n - 1;
  }

  std::size_t draw_initial(CounterRng &rng) const {
    return pick(init_cumulative_.data(), states(), rng.uniform() * init_cumulative_.back());
  }
  std::size_t draw_next(std::size_t from, CounterRng &rng) const {
    const std::size_t n = states();
    const double *row = cumulative_.data() + from * n;
    return pick(row, n, rng.uniform() * row[n - 1]);
  }

 private:
  Eigen::MatrixXd P_;
  Eigen::VectorXd a_;
  Eigen::VectorXd init_;
  Eigen::VectorXd pi_;
  std::vector<double> cumulative_;
  std::vector<double> init_cumulative_;
};

// Everything the limit theorems need from the marks.
struct MarkStats {
  Eigen::VectorXd pi_star;
  double a_star = 0.0;
  double sigma_star = 0.0;
  // Solution of (P + Pi* - I) g = b with b(i) = a* - a(i).
  Eigen::VectorXd g;
};

inline double mark_mean(const MarkChain &chain) { return chain.stationary().dot(chain.marks()); }

inline MarkStats mark_stats(const MarkChain &chain) {
  const Eigen::MatrixXd &P = chain.transition();
  const Eigen::Index n = P.rows();
  MarkStats s;
  s.pi_star = chain.stationary();
  s.a_star = s.pi_star.dot(chain.marks());
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(n, s.a_star) - chain.marks();

  const Eigen::MatrixXd pi_matrix = Eigen::VectorXd::Ones(n) * s.pi_star.transpose();
  const Eigen::MatrixXd system = P + pi_matrix - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(kSingularityThreshold);
  if (!lu.isInvertible())
    throw std::invalid_argument("chain.P: (P + Pi* - I) is singular; chain is not ergodic");
  s.g = lu.solve(b);

  double variance = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sq = 0.0, lin = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = s.g(j) - s.g(i);
      sq += d * d * P(i, j);
      lin += d * P(i, j);
    }
    const double v = b(i) * b(i) + sq - 2.0 * b(i) * lin;
    variance += s.pi_star(i) * v;
  }
  s.sigma_star = std::sqrt(std::max(variance, 0.0));
  return s;
}

inline double mark_sigma(const MarkChain &chain) { return mark_stats(chain).sigma_star; }

// X_1 ~ init, then transitions per P. States are 0-based.
inline std::vector<std::size_t> simulate_chain(const MarkChain &chain, std::size_t n, CounterRng &rng) {
  std::vector<std::size_t> states;
  states.reserve(n);
  if (n == 0) return states;
  std::size_t x = chain.draw_initial(rng);
  states.push_back(x);
  for (std::size_t k = 1; k < n; ++k) {
    x = chain.draw_next(x, rng);
    states.push_back(x);
  }
  return states;
}

inline std::vector<std::size_t> simulate_chain(const MarkChain &chain, std::size_t n, std::uint64_t seed) {
  CounterRng rng(StreamId{seed, 0, StreamRole::kMarks});
  return simulate_chain(chain, n, rng);
}

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_MARKOV_CHAIN_HPP_
