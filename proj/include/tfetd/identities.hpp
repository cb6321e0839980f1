#pragma once

// Numerical checks of the tempered-calculus identities the Galerkin form
// relies on: Fourier symbols, the semigroup law, adjointness of the left and
// right integrals, and D o I = id.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tfetd/errors.hpp"
#include "tfetd/field.hpp"
#include "tfetd/params.hpp"
#include "tfetd/quadrature.hpp"
#include "tfetd/tfrac.hpp"

namespace tfetd {

struct FourierCheckOptions {
  int grid_points = 4096;
  int frequencies = 121;
  double band_widths = 3.0;  // compare for |omega| <= band_widths / width
  double centre = 0.5;
};

/// Max over |omega| <= band of |F[I_+^{alpha,lambda} f](omega) -
/// (lambda + i omega)^{-alpha} f^(omega)| for the Gaussian
/// f(x) = exp(-(x - c)^2 / (2 w^2)). The left integral is tabulated on a
/// uniform grid long enough for its exponential tail to decay, and the
/// transform is the trapezoidal sum on that grid.
inline double check_fourier_symbol(const TemperedParams& p, double width,
                                   const FourierCheckOptions& opt = {}) {
  if (!(p.lambda > 0.0)) {
    throw DomainError("check_fourier_symbol: needs lambda > 0 for a decaying tail");
  }
  const double c = opt.centre;
  if (!(width > 0.0) || c - 10.0 * width < 0.0 || c + 10.0 * width > 1.0) {
    throw DomainError("check_fourier_symbol: Gaussian must sit inside [0, 1]");
  }
  const double inv2w2 = 1.0 / (2.0 * width * width);
  const ScalarField gauss = ScalarField::smooth(
      [=](double x) { return std::exp(-(x - c) * (x - c) * inv2w2); });

  QuadratureRule rule;
  rule.panel_width = width / 2.0;
  rule.jacobi_nodes = 24;
  rule.legendre_nodes = 16;
  const FieldOperators ops(gauss, p.lambda, rule);

  const double tail = c + 10.0 * width + 38.0 / p.lambda;
  const int n = opt.grid_points;
  const double dx = tail / (n - 1);
  std::vector<double> values(n);
  for (int k = 0; k < n; ++k) values[k] = ops.integral(Side::Left, p.alpha, k * dx);

  const double band = opt.band_widths / width;
  double worst = 0.0;
  for (int m = 0; m < opt.frequencies; ++m) {
    const double omega = -band + 2.0 * band * m / (opt.frequencies - 1);
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      acc += w * values[k] * std::polar(1.0, -omega * k * dx);
    }
    acc *= dx;
    const std::complex<double> fhat = width * std::sqrt(2.0 * std::numbers::pi) *
                                      std::exp(-0.5 * width * width * omega * omega) *
                                      std::polar(1.0, -omega * c);
    const std::complex<double> symbol = std::pow(std::complex<double>(p.lambda, omega), -p.alpha);
    worst = std::max(worst, std::abs(acc - symbol * fhat));
  }
  return worst;
}

struct IdentityDeviations {
  double semigroup_dev = 0.0;
  double adjoint_dev = 0.0;
  double inverse_dev = 0.0;
};

/// Max deviations of
///   I^a I^b f       vs  I^{a+b} f,
///   <I_+^a f, g>    vs  <f, I_-^a g>,
///   D^a I^a f       vs  f,
/// for the fixed pair f = x^4 (1-x)^6, g = x^5 (1-x)^3 (zero-extended),
/// sampled at x = 0.2, 0.4, ..., 1.0. The inner operator is evaluated by
/// quadrature at every outer node.
inline IdentityDeviations check_semigroup_adjoint(double a, double b, double lambda,
                                                  const QuadratureRule& rule = {}) {
  if (!(a > 0.0 && b > 0.0 && a <= 1.0)) {
    throw DomainError("check_semigroup_adjoint: need 0 < a <= 1 and b > 0");
  }
  const Polynomial fp = Polynomial::power_product(4, 6).scaled(1000.0);
  const Polynomial gp = Polynomial::power_product(5, 3).scaled(100.0);
  const ScalarField f = ScalarField::polynomial(fp);
  const ScalarField g = ScalarField::polynomial(gp);
  const ScalarField df = ScalarField::polynomial(fp.derivative());
  const FieldOperators fo(f, lambda, rule);
  const FieldOperators go(g, lambda, rule);
  const FieldOperators dfo(df, lambda, rule);

  IdentityDeviations out;
  const double samples[] = {0.2, 0.4, 0.6, 0.8, 1.0};

  const ScalarField inner_b =
      ScalarField::smooth([&](double s) { return fo.integral(Side::Left, b, s); });
  const FieldOperators inner_b_ops(inner_b, lambda, rule);
  for (double x : samples) {
    const double lhs = inner_b_ops.integral(Side::Left, a, x);
    const double rhs = fo.integral(Side::Left, a + b, x);
    out.semigroup_dev = std::max(out.semigroup_dev, std::abs(lhs - rhs));
  }

  {
    const GaussRule& gl = gauss_legendre(rule.legendre_nodes);
    const int panels = 16;
    double lhs = 0.0;
    double rhs = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double lo = static_cast<double>(pnl) / panels;
      const double w = 1.0 / panels;
      for (std::size_t k = 0; k < gl.size(); ++k) {
        const double x = lo + w * gl.nodes[k];
        lhs += w * gl.weights[k] * fo.integral(Side::Left, a, x) * g(x);
        rhs += w * gl.weights[k] * f(x) * go.integral(Side::Right, a, x);
      }
    }
    out.adjoint_dev = std::abs(lhs - rhs);
  }

  // h = I^a f has h' = I^a f' because f(0) = 0; both feed the Caputo form.
  const ScalarField inner_a = ScalarField::smooth(
      [&](double s) { return fo.integral(Side::Left, a, s); },
      [&](double s) { return dfo.integral(Side::Left, a, s); });
  const FieldOperators inner_a_ops(inner_a, lambda, rule);
  for (double x : samples) {
    const double lhs = inner_a_ops.derivative(Side::Left, a, x);
    out.inverse_dev = std::max(out.inverse_dev, std::abs(lhs - f(x)));
  }
  return out;
}

inline IdentityDeviations check_semigroup_adjoint(const TemperedParams& p,
                                                  const QuadratureRule& rule = {}) {
  return check_semigroup_adjoint(p.mu, p.mu, p.lambda, rule);
}

}  // namespace tfetd
