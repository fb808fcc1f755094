#ifndef HAWKES_RISK_KERNEL_HPP_
#define HAWKES_RISK_KERNEL_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace hawkes_risk {

// mu(t) = alpha * exp(-beta t)
struct ExponentialKernel {
  double alpha = 0.0;
  double beta = 0.0;
};

// mu(t) = k / (c + t)^p  (Omori-type decay)
struct PowerLawKernel {
  double k = 0.0;
  double c = 0.0;
  double p = 0.0;
};

// Excitation function of a linear Hawkes process. Construction validates the
// parameters and requires a branching ratio strictly inside (0, 1).
class KernelSpec {
 public:
  using Variant = std::variant<ExponentialKernel, PowerLawKernel>;

  static KernelSpec exponential(double alpha, double beta) {
    return KernelSpec(ExponentialKernel{alpha, beta});
  }
  static KernelSpec power_law(double k, double c, double p) {
    return KernelSpec(PowerLawKernel{k, c, p});
  }

  explicit KernelSpec(Variant v) : kernel_(v) {
    validate();
    branching_ratio_ = std::visit([](const auto &k) { return ratio_of(k); }, kernel_);
    if (!(branching_ratio_ > 0.0 && branching_ratio_ < 1.0)) {
      throw std::invalid_argument(
          "kernel: branching ratio must lie in (0, 1) for a stationary Hawkes "
          "process, got " + std::to_string(branching_ratio_));
    }
  }

  const Variant &variant() const { return kernel_; }
  bool is_exponential() const { return std::holds_alternative<ExponentialKernel>(kernel_); }

  // Integral of mu over [0, inf).
  double branching_ratio() const { return branching_ratio_; }

  // mu(t) for t >= 0.
  double operator()(double t) const {
    return std::visit(
        [t](const auto &k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ExponentialKernel>) {
            return k.alpha * std::exp(-k.beta * t);
          } else {
            return k.k * std::pow(k.c + t, -k.p);
          }
        },
        kernel_);
  }

  // Intensity jump caused by one event, mu(0+).
  double jump() const { return (*this)(0.0); }

  // Integral of mu over [0, x].
  double integral(double x) const {
    if (x <= 0.0) return 0.0;
    return std::visit(
        [x](const auto &k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ExponentialKernel>) {
            return -(k.alpha / k.beta) * std::expm1(-k.beta * x);
          } else {
            const double q = 1.0 - k.p;
            // c^q - (c+x)^q, written to keep precision for small x.
            const double head = std::pow(k.c, q);
            const double diff = -head * std::expm1(q * std::log1p(x / k.c));
            return k.k / (k.p - 1.0) * diff;
          }
        },
        kernel_);
  }

 private:
  static double ratio_of(const ExponentialKernel &k) { return k.alpha / k.beta; }
  static double ratio_of(const PowerLawKernel &k) {
    return k.k * std::pow(k.c, 1.0 - k.p) / (k.p - 1.0);
  }

  void validate() const {
    if (const auto *e = std::get_if<ExponentialKernel>(&kernel_)) {
      if (!(e->alpha > 0.0 && std::isfinite(e->alpha)))
        throw std::invalid_argument("kernel.alpha: must be finite and > 0");
      if (!(e->beta > 0.0 && std::isfinite(e->beta)))
        throw std::invalid_argument("kernel.beta: must be finite and > 0");
    } else {
      const auto &p = std::get<PowerLawKernel>(kernel_);
      if (!(p.k > 0.0 && std::isfinite(p.k)))
        throw std::invalid_argument("kernel.k: must be finite and > 0");
      if (!(p.c > 0.0 && std::isfinite(p.c)))
        throw std::invalid_argument("kernel.c: must be finite and > 0");
      if (!(p.p > 1.0 && std::isfinite(p.p)))
        throw std::invalid_argument("kernel.p: must be finite and > 1 for an integrable kernel");
    }
  }

  Variant kernel_;
  double branching_ratio_ = 0.0;
};

inline double branching_ratio(const KernelSpec &kernel) { return kernel.branching_ratio(); }

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_KERNEL_HPP_
