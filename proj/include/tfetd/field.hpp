#pragma once

// Evaluable functions on [0, 1] with zero extension, as consumed by the
// fractional operators: smooth callables, polynomials, and piecewise
// linear/constant data with explicit breakpoints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfetd/errors.hpp"

namespace tfetd {

/// Dense power-basis polynomial, coefficient k multiplies x^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  /// x^p (1 - x)^q
  static Polynomial power_product(int p, int q) {
    Polynomial out({1.0});
    for (int i = 0; i < p; ++i) out = out * Polynomial({0.0, 1.0});
    for (int i = 0; i < q; ++i) out = out * Polynomial({1.0, -1.0});
    return out;
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  Polynomial operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial({0.0});
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }

  Polynomial scaled(double s) const {
    std::vector<double> r = c_;
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }

  std::span<const double> coefficients() const { return c_; }

 private:
  std::vector<double> c_;
};

enum class Smoothness { Smooth, PiecewiseLinear, PiecewiseConstant };

/// One smooth branch of a field on [lo, hi]. When `analytic` is set the
/// callables are valid (and smooth) beyond [lo, hi], which lets the
/// operators integrate over the branch as a difference of two integrals
/// anchored at the kernel singularity.
struct FieldPiece {
  double lo = 0.0;
  double hi = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  bool analytic = true;
};

/// A real function on [0, 1], zero outside. Pieces are sorted, disjoint and
/// half-open [lo, hi) except that the last piece also owns its right end.
class ScalarField {
 public:
  ScalarField() = default;

  ScalarField(Smoothness cls, std::vector<FieldPiece> pieces)
      : cls_(cls), pieces_(std::move(pieces)) {
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& p = pieces_[k];
      if (!(p.lo < p.hi) || p.lo < 0.0 || p.hi > 1.0) {
        throw DomainError("ScalarField: piece outside [0, 1] or empty");
      }
      if (k > 0 && pieces_[k - 1].hi > p.lo) {
        throw DomainError("ScalarField: pieces must be sorted and disjoint");
      }
      if (!p.f) throw DomainError("ScalarField: piece without a value function");
    }
  }

  /// Single smooth branch over [0, 1]. Derivatives are optional and only
  /// needed by the derivative operators.
  static ScalarField smooth(std::function<double(double)> f,
                            std::function<double(double)> df = {},
                            std::function<double(double)> d2f = {}) {
    return ScalarField(Smoothness::Smooth,
                       {FieldPiece{0.0, 1.0, std::move(f), std::move(df), std::move(d2f), true}});
  }

  static ScalarField polynomial(const Polynomial& p) {
    auto d1 = p.derivative();
    auto d2 = d1.derivative();
    return smooth([p](double x) { return p(x); }, [d1](double x) { return d1(x); },
                  [d2](double x) { return d2(x); });
  }

  /// Linear interpolant of (xs[k], ys[k]); zero outside [xs.front(), xs.back()].
  static ScalarField piecewise_linear(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
      throw DomainError("piecewise_linear: need matching node/value lists of length >= 2");
    }
    std::vector<FieldPiece> pieces;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double x0 = xs[k];
      const double slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
      const double y0 = ys[k];
      pieces.push_back(FieldPiece{
          xs[k], xs[k + 1], [=](double x) { return y0 + slope * (x - x0); },
          [=](double) { return slope; }, [](double) { return 0.0; }, true});
    }
    return ScalarField(Smoothness::PiecewiseLinear, std::move(pieces));
  }

  /// Hat function of half-width h centred at c.
  static ScalarField hat(double c, double h) {
    const double xs[3] = {c - h, c, c + h};
    const double ys[3] = {0.0, 1.0, 0.0};
    return piecewise_linear(xs, ys);
  }

  /// Value values[k] on [breaks[k], breaks[k+1]); zero outside.
  static ScalarField piecewise_constant(std::span<const double> breaks,
                                        std::span<const double> values) {
    if (breaks.size() != values.size() + 1 || values.empty()) {
      throw DomainError("piecewise_constant: need one more break than values");
    }
    std::vector<FieldPiece> pieces;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double v = values[k];
      pieces.push_back(FieldPiece{breaks[k], breaks[k + 1], [v](double) { return v; },
                                  [](double) { return 0.0; }, [](double) { return 0.0; },
                                  true});
    }
    return ScalarField(Smoothness::PiecewiseConstant, std::move(pieces));
  }

  Smoothness smoothness() const { return cls_; }
  std::span<const FieldPiece> pieces() const { return pieces_; }

  /// Sorted, de-duplicated piece boundaries.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& p : pieces_) {
      b.push_back(p.lo);
      b.push_back(p.hi);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  /// Index of the piece owning x, or -1 when x lies in the zero extension.
  int locate(double x) const {
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& p = pieces_[k];
      const bool last = k + 1 == pieces_.size();
      if ((x >= p.lo && x < p.hi) || (last && x == p.hi)) return static_cast<int>(k);
    }
    return -1;
  }

  double operator()(double x) const {
    const int k = locate(x);
    return k < 0 ? 0.0 : pieces_[k].f(x);
  }

  /// Mirror image y -> f(1 - y). Right-sided operators are evaluated as
  /// left-sided operators on the mirrored field.
  ScalarField reflected() const {
    std::vector<FieldPiece> out;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      FieldPiece q;
      q.lo = 1.0 - it->hi;
      q.hi = 1.0 - it->lo;
      q.analytic = it->analytic;
      q.f = [f = it->f](double y) { return f(1.0 - y); };
      if (it->df) q.df = [df = it->df](double y) { return -df(1.0 - y); };
      if (it->d2f) q.d2f = [d2f = it->d2f](double y) { return d2f(1.0 - y); };
      out.push_back(std::move(q));
    }
    // Half-open convention flips under reflection; re-validate ordering only.
    ScalarField r;
    r.cls_ = cls_;
    r.pieces_ = std::move(out);
    return r;
  }

 private:
  Smoothness cls_ = Smoothness::Smooth;
  std::vector<FieldPiece> pieces_;
};

}  // namespace tfetd
