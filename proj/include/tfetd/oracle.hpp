#pragma once

// Reference evaluations built on the adaptive Gauss-Kronrod integrator.
// The weak singularity r^e is removed by the substitution u = r^{1+e}
// instead of being absorbed into a Jacobi weight, so these values are an
// independent check on the production quadrature. Used by tests, the
// validation suite and fixture generation; never by assembly.

#include <cmath>

#include "tfetd/field.hpp"
#include "tfetd/params.hpp"
#include "tfetd/quadrature.hpp"
#include "tfetd/specfun.hpp"
#include "tfetd/tfrac.hpp"

namespace tfetd::oracle {

/// int_{r0}^{r1} r^e h(r) dr, e > -1.
template <typename H>
double power_kernel(const AdaptiveIntegrator& quad, double e, H&& h, double r0, double r1) {
  if (r1 <= r0) return 0.0;
  if (e >= 0.0 || r0 > 0.0) {
    return quad.integrate([&](double r) { return std::pow(r, e) * h(r); }, r0, r1);
  }
  const double p = 1.0 / (1.0 + e);
  return p * quad.integrate([&](double u) { return h(std::pow(u, p)); }, 0.0,
                            std::pow(r1, 1.0 + e));
}

namespace detail {

inline double left_sum(const AdaptiveIntegrator& quad, const ScalarField& field, int n, double e,
                       double lambda, double x) {
  double sum = 0.0;
  for (const auto& p : field.pieces()) {
    if (!(p.lo < x)) break;
    const double top = std::min(p.hi, x);
    auto h = [&](double r) {
      return std::exp(-lambda * r) * tfetd::detail::tempered_jet(p, n, lambda, x - r);
    };
    sum += power_kernel(quad, e, h, x - top, x - p.lo);
  }
  return sum;
}

inline double left_derivative(const AdaptiveIntegrator& quad, const ScalarField& field,
                              double order, double lambda, double x) {
  if (x <= 0.0) return 0.0;
  const int n = static_cast<int>(std::ceil(order));
  const double e = n - 1 - order;
  double value = left_sum(quad, field, n, e, lambda, x) / std::tgamma(n - order);
  for (double b : field.breakpoints()) {
    if (!(b < x)) break;
    for (int k = 0; k < n; ++k) {
      const double jump = tfetd::detail::jet_jump(field, k, lambda, b);
      if (jump == 0.0) continue;
      const double r = x - b;
      value += std::exp(-lambda * r) * std::pow(r, k - order) / std::tgamma(k + 1 - order) * jump;
    }
  }
  return value;
}

}  // namespace detail

inline double tempered_integral(const ScalarField& f, double order, double lambda, Side side,
                                double x, double tol = 1e-12) {
  AdaptiveIntegrator quad(tol);
  if (side == Side::Right) {
    return tempered_integral(f.reflected(), order, lambda, Side::Left, 1.0 - x, tol);
  }
  if (x <= 0.0) return 0.0;
  return detail::left_sum(quad, f, 0, order - 1.0, lambda, x) / std::tgamma(order);
}

/// Non-integer order in (0, 2).
inline double tempered_derivative(const ScalarField& f, double order, double lambda, Side side,
                                  double x, double tol = 1e-12) {
  AdaptiveIntegrator quad(tol);
  return side == Side::Left ? detail::left_derivative(quad, f, order, lambda, x)
                            : detail::left_derivative(quad, f.reflected(), order, lambda, 1.0 - x);
}

inline double riesz_tempered(const ScalarField& f, const TemperedParams& p, double x,
                             double tol = 1e-12) {
  const double left = tempered_derivative(f, p.alpha, p.lambda, Side::Left, x, tol);
  const double right = tempered_derivative(f, p.alpha, p.lambda, Side::Right, x, tol);
  return p.c_alpha * (left + right - 2.0 * p.lambda_pow_alpha() * f(x));
}

/// Stiffness entry R(phi_j, phi_i) on the uniform mesh with N elements, by
/// adaptive quadrature over each element of adaptive pointwise derivatives.
inline double stiffness_entry(int n_elements, const TemperedParams& p, int i, int j,
                              double tol = 1e-11) {
  const double h = 1.0 / n_elements;
  const ScalarField phi_i = ScalarField::hat(i * h, h);
  const ScalarField phi_j = ScalarField::hat(j * h, h);
  const ScalarField phi_i_m = phi_i.reflected();
  const ScalarField phi_j_m = phi_j.reflected();
  const AdaptiveIntegrator inner(tol * 1e-2);
  auto dl = [&](const ScalarField& f, double x) {
    return detail::left_derivative(inner, f, p.mu, p.lambda, x);
  };
  auto integrand = [&](double x) {
    const double a = dl(phi_j, x) * dl(phi_i_m, 1.0 - x);
    const double b = dl(phi_j_m, 1.0 - x) * dl(phi_i, x);
    return a + b;
  };
  const AdaptiveIntegrator outer(tol / n_elements, 200000);
  double cross = 0.0;
  for (int e = 0; e < n_elements; ++e) cross += outer.integrate(integrand, e * h, (e + 1) * h);
  double mass = 0.0;
  if (i == j) mass = 2.0 * h / 3.0;
  if (std::abs(i - j) == 1) mass = h / 6.0;
  return -p.c_alpha * cross + 2.0 * p.c_alpha * p.lambda_pow_alpha() * mass;
}

}  // namespace tfetd::oracle
