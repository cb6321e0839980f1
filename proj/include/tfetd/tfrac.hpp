#pragma once

// Pointwise tempered Riemann-Liouville integrals and derivatives of
// zero-extended fields on [0, 1], and the Riesz-tempered operator.
//
// Every operator is reduced to integrals of the form
//
//   int_0^x (x - s)^e e^{-lambda (x - s)} (T_n f)(s) ds,
//   T_0 f = f,  T_1 f = f' + lambda f,  T_2 f = f'' + 2 lambda f' + lambda^2 f,
//
// split at the field's breakpoints. The piece that reaches s = x carries the
// weak singularity r^e (r = x - s) and is integrated with Gauss-Jacobi;
// the remaining pieces are smooth and use Gauss-Legendre panels. Jumps of
// T_k f at breakpoints contribute closed-form terms. Right-sided operators
// are left-sided operators applied to the mirrored field.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "tfetd/errors.hpp"
#include "tfetd/field.hpp"
#include "tfetd/params.hpp"
#include "tfetd/quadrature.hpp"
#include "tfetd/specfun.hpp"

namespace tfetd {

namespace detail {

inline double tempered_jet(const FieldPiece& p, int n, double lambda, double s) {
  switch (n) {
    case 0:
      return p.f(s);
    case 1: {
      if (!p.df) throw PreconditionError("tempered derivative needs f' on every piece");
      return p.df(s) + lambda * p.f(s);
    }
    case 2: {
      if (!p.df || !p.d2f) {
        throw PreconditionError("second-order tempered derivative needs f' and f''");
      }
      return p.d2f(s) + 2.0 * lambda * p.df(s) + lambda * lambda * p.f(s);
    }
    default:
      throw DomainError("tempered_jet: unsupported order");
  }
}

/// Integrals of r^e e^{-lambda r} g(x - r) for one smooth branch g.
class KernelIntegrator {
 public:
  KernelIntegrator(const QuadratureRule& rule, double exponent, double lambda)
      : rule_(rule),
        jacobi_(gauss_jacobi(rule.jacobi_nodes, exponent)),
        legendre_(gauss_legendre(rule.legendre_nodes)),
        e_(exponent),
        lambda_(lambda) {}

  /// int_0^R with the singularity at r = 0.
  template <typename G>
  double anchored(const G& g, double x, double R) const {
    if (R <= 0.0) return 0.0;
    const double head = std::min(R, rule_.panel_width);
    double sum = 0.0;
    for (std::size_t k = 0; k < jacobi_.size(); ++k) {
      const double r = head * jacobi_.nodes[k];
      sum += jacobi_.weights[k] * std::exp(-lambda_ * r) * g(x - r);
    }
    sum *= std::pow(head, e_ + 1.0);
    if (R > head) sum += panels(g, x, head, R);
    return sum;
  }

  /// int_d^{d+L}, d > 0: the kernel is smooth but may be close to singular.
  template <typename G>
  double offset(const G& g, double x, double d, double L, bool analytic) const {
    if (L <= 0.0) return 0.0;
    if (analytic && d + L <= rule_.panel_width) {
      return anchored(g, x, d + L) - anchored(g, x, d);
    }
    return panels(g, x, d, d + L);
  }

 private:
  // Gauss-Legendre on [a, b] (a > 0) with panels no wider than the distance
  // to r = 0 and no wider than panel_width.
  template <typename G>
  double panels(const G& g, double x, double a, double b) const {
    double sum = 0.0;
    double lo = a;
    while (lo < b) {
      const double width = std::min({rule_.panel_width, lo, b - lo});
      const double hi = (b - lo - width <= 1e-15 * b) ? b : lo + width;
      const double w = hi - lo;
      double part = 0.0;
      for (std::size_t k = 0; k < legendre_.size(); ++k) {
        const double r = lo + w * legendre_.nodes[k];
        part += legendre_.weights[k] * std::pow(r, e_) * std::exp(-lambda_ * r) * g(x - r);
      }
      sum += w * part;
      lo = hi;
    }
    return sum;
  }

  const QuadratureRule& rule_;
  const GaussRule& jacobi_;
  const GaussRule& legendre_;
  double e_;
  double lambda_;
};

/// Left-sided kernel integral of T_n f, summed over pieces, not normalised.
inline double left_kernel_sum(const ScalarField& field, int n, double exponent, double lambda,
                              double x, const QuadratureRule& rule) {
  KernelIntegrator ki(rule, exponent, lambda);
  double sum = 0.0;
  for (const auto& p : field.pieces()) {
    if (!(p.lo < x)) break;
    const double top = std::min(p.hi, x);
    auto g = [&p, n, lambda](double s) { return tempered_jet(p, n, lambda, s); };
    if (top == x) {
      sum += ki.anchored(g, x, x - p.lo);
    } else {
      sum += ki.offset(g, x, x - top, top - p.lo, p.analytic);
    }
  }
  return sum;
}

/// Jump of T_k f across the breakpoint b (right limit minus left limit).
inline double jet_jump(const ScalarField& field, int k, double lambda, double b) {
  double left = 0.0;
  double right = 0.0;
  for (const auto& p : field.pieces()) {
    if (p.hi == b) left = tempered_jet(p, k, lambda, b);
    if (p.lo == b) right = tempered_jet(p, k, lambda, b);
  }
  return right - left;
}

inline double left_derivative(const ScalarField& field, double order, double lambda, double x,
                              const QuadratureRule& rule) {
  if (!(order > 0.0 && order < 2.0)) {
    throw DomainError("tempered derivative: order must lie in (0, 2)");
  }
  if (x <= 0.0) return 0.0;
  const double rounded = std::nearbyint(order);
  if (rounded == order) {
    const int k = field.locate(x);
    return k < 0 ? 0.0 : tempered_jet(field.pieces()[k], static_cast<int>(order), lambda, x);
  }
  const int n = static_cast<int>(std::ceil(order));
  const double e = n - 1 - order;
  double value = left_kernel_sum(field, n, e, lambda, x, rule) / specfun::gamma_fn(n - order);
  for (double b : field.breakpoints()) {
    if (!(b < x)) break;
    for (int k = 0; k < n; ++k) {
      const double jump = jet_jump(field, k, lambda, b);
      if (jump == 0.0) continue;
      const double r = x - b;
      value += std::exp(-lambda * r) * std::pow(r, k - order) /
               specfun::gamma_fn(k + 1 - order) * jump;
    }
  }
  return value;
}

inline double left_integral(const ScalarField& field, double order, double lambda, double x,
                            const QuadratureRule& rule) {
  if (!(order > 0.0)) throw DomainError("tempered integral: order must be positive");
  if (x <= 0.0) return 0.0;
  return left_kernel_sum(field, 0, order - 1.0, lambda, x, rule) / specfun::gamma_fn(order);
}

inline void require_zero_boundary(const ScalarField& field, Side side) {
  const double at = side == Side::Left ? 0.0 : 1.0;
  const double v = field(at);
  if (std::abs(v) > 1e-14) {
    throw PreconditionError("tempered derivative: field must vanish at x = " +
                            std::to_string(at) + ", got " + std::to_string(v));
  }
}

}  // namespace detail

/// A field together with its mirror image, for repeated operator
/// evaluation on both sides.
class FieldOperators {
 public:
  FieldOperators(ScalarField field, double lambda, QuadratureRule rule = {})
      : field_(std::move(field)),
        mirrored_(field_.reflected()),
        lambda_(lambda),
        rule_(rule) {
    rule_.validate();
    if (!(lambda >= 0.0)) throw DomainError("tempering rate must be >= 0");
  }

  /// Tempered integral of the given order at x.
  double integral(Side side, double order, double x) const {
    return side == Side::Left ? detail::left_integral(field_, order, lambda_, x, rule_)
                              : detail::left_integral(mirrored_, order, lambda_, 1.0 - x, rule_);
  }

  /// Tempered derivative e^{-lambda x} D^order [e^{lambda .} f] (left) or
  /// e^{lambda x} D^order_- [e^{-lambda .} f] (right), order in (0, 2).
  double derivative(Side side, double order, double x) const {
    detail::require_zero_boundary(field_, side);
    return side == Side::Left ? detail::left_derivative(field_, order, lambda_, x, rule_)
                              : detail::left_derivative(mirrored_, order, lambda_, 1.0 - x, rule_);
  }

  const ScalarField& field() const { return field_; }
  double lambda() const { return lambda_; }
  const QuadratureRule& rule() const { return rule_; }

 private:
  ScalarField field_;
  ScalarField mirrored_;
  double lambda_;
  QuadratureRule rule_;
};

inline double tempered_integral(const ScalarField& f, double order, double lambda, Side side,
                                double x, const QuadratureRule& rule = {}) {
  return FieldOperators(f, lambda, rule).integral(side, order, x);
}

inline double tempered_integral(const ScalarField& f, const TemperedParams& p, Side side, double x,
                                const QuadratureRule& rule = {}) {
  return tempered_integral(f, p.alpha, p.lambda, side, x, rule);
}

inline double tempered_derivative(const ScalarField& f, const TemperedParams& p, Side side,
                                  double order, double x, const QuadratureRule& rule = {}) {
  return FieldOperators(f, p.lambda, rule).derivative(side, order, x);
}

/// Riesz-tempered operator c_alpha [D_+^{alpha,lambda} f + D_-^{alpha,lambda} f
/// - 2 lambda^alpha f](x). The first-derivative corrections of the two
/// one-sided operators cancel and are not formed.
inline double apply_riesz_tempered(const FieldOperators& ops, const TemperedParams& p, double x) {
  const double left = ops.derivative(Side::Left, p.alpha, x);
  const double right = ops.derivative(Side::Right, p.alpha, x);
  return p.c_alpha * (left + right - 2.0 * p.lambda_pow_alpha() * ops.field()(x));
}

inline double apply_riesz_tempered(const ScalarField& f, const TemperedParams& p, double x,
                                   const QuadratureRule& rule = {}) {
  return apply_riesz_tempered(FieldOperators(f, p.lambda, rule), p, x);
}

}  // namespace tfetd
