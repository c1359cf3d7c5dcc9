#pragma once

// Special-function kernels for the interference analysis: log-gamma, the
// restricted Gauss hypergeometric family 2F1(1, b; b+1; z) on z <= 0 with
// b in (0,1), and the interference kernel Z(tau, alpha) built on it.
//
// The family is exactly what the coverage/rate integrals need: with a path
// loss exponent alpha > 2, b = 1 - 2/alpha and c = b + 1. Nothing more
// general is supported.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hcn {

// Iteration or quadrature failed to reach its tolerance; carries the error
// estimate that was actually achieved.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

struct HypergeometricEval {
  double value = 0.0;
  int terms_used = 0;
  bool converged = false;
};

// ln Gamma(x), x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive");
  }
  return std::lgamma(x);
}

namespace detail {

inline constexpr int kMaxSeriesTerms = 10000;
inline constexpr double kSeriesRelTol = 1e-15;

inline HypergeometricEval sum_checked(double value, int terms, bool converged,
                                      const char* where) {
  HypergeometricEval out{value, terms, converged};
  if (!converged) {
    throw NumericalError(std::string(where) + ": series did not converge within " +
                             std::to_string(kMaxSeriesTerms) + " terms",
                         kSeriesRelTol);
  }
  return out;
}

// 2F1(1, b; b+1; z) = sum_n b z^n / (b + n). Used for |z| < 1, fast near 0.
inline HypergeometricEval f21_series_direct(double b, double z) {
  double sum = 0.0;
  double zn = 1.0;  // z^n
  int n = 0;
  for (; n < kMaxSeriesTerms; ++n) {
    const double term = b * zn / (b + n);
    sum += term;
    if (std::fabs(term) < kSeriesRelTol * std::fabs(sum)) {
      return sum_checked(sum, n + 1, true, "f21_series_direct");
    }
    zn *= z;
  }
  return sum_checked(sum, n, false, "f21_series_direct");
}

// Pfaff transform: 2F1(1, b; b+1; z) = (1-z)^{-1} 2F1(1, 1; b+1; z/(z-1)).
// The transformed argument lies in [0, 1) for every z <= 0, so the series
// always converges, if slowly as z -> -inf.
inline HypergeometricEval f21_series_pfaff(double b, double z) {
  const double w = z / (z - 1.0);
  const double scale = 1.0 / (1.0 - z);
  double term = 1.0;
  double sum = 0.0;
  int n = 0;
  for (; n < kMaxSeriesTerms; ++n) {
    sum += term;
    if (std::fabs(term) < kSeriesRelTol * std::fabs(sum)) {
      return sum_checked(scale * sum, n + 1, true, "f21_series_pfaff");
    }
    term *= (n + 1.0) / (b + 1.0 + n) * w;
  }
  return sum_checked(scale * sum, n, false, "f21_series_pfaff");
}

// Connection formula at large negative z:
//   2F1(1, b; b+1; z) = pi*b/sin(pi*b) * (-z)^{-b}
//                       + b/(b-1) * (-z)^{-1} * 2F1(1, 1-b; 2-b; 1/z).
// The inner function is the same family with b' = 1-b; its Pfaff argument is
// 1/(1-z) < 1/2 for every z < -1, so this branch converges quickly no matter
// how large |z| gets.
inline HypergeometricEval f21_large_negative(double b, double z) {
  const double mz = -z;
  const double pi = std::numbers::pi;
  const double lead = b * pi / std::sin(b * pi) * std::pow(mz, -b);
  HypergeometricEval inner = f21_series_pfaff(1.0 - b, 1.0 / z);
  const double corr = b / (b - 1.0) / mz * inner.value;
  return HypergeometricEval{lead + corr, inner.terms_used, inner.converged};
}

}  // namespace detail

// Gauss 2F1 restricted to the family a = 1, c = b + 1, b in (0, 1)
// (equivalently b = 1 - 2/alpha with alpha > 2) and z <= 0.
inline HypergeometricEval gauss_2f1_unit_family(double a, double b, double c,
                                                double z) {
  if (a != 1.0 || std::fabs(c - b - 1.0) > 1e-9) {
    throw std::domain_error(
        "gauss_2f1_unit_family: only the family a=1, c=b+1 is supported");
  }
  if (!(b > 0.0 && b < 1.0)) {
    throw std::domain_error(
        "gauss_2f1_unit_family: b must lie in (0,1); "
        "path loss exponent must exceed 2");
  }
  if (z > 0.0) {
    throw std::domain_error("gauss_2f1_unit_family: argument must satisfy z <= 0");
  }
  if (z == 0.0) {
    return HypergeometricEval{1.0, 0, true};
  }
  if (z > -0.75) {
    return detail::f21_series_direct(b, z);
  }
  if (z >= -8.0) {
    return detail::f21_series_pfaff(b, z);
  }
  return detail::f21_large_negative(b, z);
}

// Interference kernel Z(tau, alpha) = 2 tau / (alpha - 2) *
// 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -tau). Nonnegative, increasing in tau,
// Z(0, alpha) = 0 exactly.
inline double z_kernel(double tau, double alpha) {
  if (!(alpha > 2.0)) {
    throw std::domain_error("z_kernel: path loss exponent must exceed 2");
  }
  if (!(tau >= 0.0)) {
    throw std::domain_error("z_kernel: threshold must be nonnegative");
  }
  if (tau == 0.0) {
    return 0.0;
  }
  const double b = 1.0 - 2.0 / alpha;
  const HypergeometricEval f = gauss_2f1_unit_family(1.0, b, b + 1.0, -tau);
  return 2.0 * tau / (alpha - 2.0) * f.value;
}

}  // namespace hcn
