#pragma once

// Gamma, log-gamma, beta and the lower incomplete gamma function, including
// the analytic continuation of gamma(z, x) to negative non-integer z.

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "tfetd/errors.hpp"

namespace tfetd::specfun {

/// Accuracy contract shared by the special functions in this header.
struct SpecFunConfig {
  double rel_tol = 1e-13;
};

inline constexpr SpecFunConfig kDefaultConfig{};

namespace detail {

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::nearbyint(x) == x;
}

inline void require_not_pole(double x, const char* fn) {
  if (is_nonpositive_integer(x)) {
    throw PoleError(std::string(fn) + ": pole at non-positive integer " +
                    std::to_string(x));
  }
}

}  // namespace detail

/// Gamma(x) for real x away from the poles {0, -1, -2, ...}. Negative
/// arguments go through the reflection formula inside the C library.
inline double gamma_fn(double x) {
  detail::require_not_pole(x, "gamma_fn");
  return std::tgamma(x);
}

/// log|Gamma(x)|. Thread safe, unlike std::lgamma which touches signgam.
inline double log_gamma(double x, int* sign = nullptr) {
  detail::require_not_pole(x, "log_gamma");
  return boost::math::lgamma(x, sign);
}

inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn: arguments must be positive");
  }
  // Ratio in log space keeps beta(200, 200) finite.
  if (a + b < 150.0) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  }
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

/// Lower incomplete gamma gamma(z, x) = int_0^x t^{z-1} e^{-t} dt.
///
/// For z < 0 (non-integer) the integral diverges; the value returned is the
/// analytic continuation obtained from the recurrence
///   gamma(z + 1, x) = z gamma(z, x) - x^z e^{-x}
/// run downward from the first shifted parameter z + k > 0.
inline double lower_incomplete_gamma(double z, double x) {
  detail::require_not_pole(z, "lower_incomplete_gamma");
  if (!(x >= 0.0)) {
    throw DomainError("lower_incomplete_gamma: x must be non-negative");
  }
  if (z > 0.0) {
    if (x == 0.0) return 0.0;
    return boost::math::tgamma_lower(z, x);
  }
  if (x == 0.0) {
    throw DomainError(
        "lower_incomplete_gamma: continuation is singular at x = 0 for z < 0");
  }
  const int shift = static_cast<int>(std::floor(-z)) + 1;
  double w = z + shift;
  double value = boost::math::tgamma_lower(w, x);
  const double log_x = std::log(x);
  for (int k = 0; k < shift; ++k) {
    w -= 1.0;
    value = (value + std::exp(w * log_x - x)) / w;
  }
  return value;
}

}  // namespace tfetd::specfun
