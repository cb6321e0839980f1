#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "tfetd/errors.hpp"

namespace tfetd {

enum class Side { Left, Right };

/// Order and tempering rate of the Riesz-tempered operator.
///
/// `c_alpha` is the Riesz normalisation -1 / (2 cos(alpha pi / 2)), which is
/// positive on (1, 2) and tends to 1/2 as alpha -> 2, so that the operator
/// recovers +d^2/dx^2 in the classical limit. `mu` is the half order used by
/// the bilinear form.
struct TemperedParams {
  double alpha = 1.5;
  double lambda = 1.0;
  double c_alpha = 0.0;
  double mu = 0.75;

  static TemperedParams make(double alpha, double lambda) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
      throw DomainError("TemperedParams: alpha must lie in (1, 2), got " +
                        std::to_string(alpha));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw DomainError("TemperedParams: lambda must be finite and >= 0");
    }
    TemperedParams p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.c_alpha = -1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0));
    p.mu = alpha / 2.0;
    return p;
  }

  /// lambda^alpha with the 0^alpha = 0 convention.
  double lambda_pow_alpha() const {
    return lambda == 0.0 ? 0.0 : std::pow(lambda, alpha);
  }
};

}  // namespace tfetd
