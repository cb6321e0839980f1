#pragma once

// Rational approximation of exp(z) behind the ETD-RDP step:
//
//   r(z) = (1 + 5z/12) / ((1 - z/4)(1 - z/3)) = 9/(1 - z/3) - 8/(1 - z/4).
//
// L-acceptable: |r(z)| <= 1 on Re z <= 0 and r(z) -> 0 as z -> -inf.

#include <complex>
#include <type_traits>

#include "tfetd/errors.hpp"

namespace tfetd {

namespace detail {

template <typename T>
void require_off_poles(const T& z) {
  if (z == T(3.0) || z == T(4.0)) throw PoleError("rdp_rational: pole at z = 3 or z = 4");
}

}  // namespace detail

/// Product form. T is double or std::complex<double>.
template <typename T>
T rdp_rational(const T& z) {
  detail::require_off_poles(z);
  const T one(1.0);
  return (one + T(5.0 / 12.0) * z) / ((one - z / T(4.0)) * (one - z / T(3.0)));
}

/// Partial-fraction form used by the time stepper.
template <typename T>
T rdp_partial_fractions(const T& z) {
  detail::require_off_poles(z);
  const T one(1.0);
  return T(9.0) / (one - z / T(3.0)) - T(8.0) / (one - z / T(4.0));
}

}  // namespace tfetd
