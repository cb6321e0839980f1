#pragma once

// Gauss-Legendre, Gauss-Jacobi and graded composite rules on [0, 1], plus the
// adaptive Gauss-Kronrod integrator used as a reference oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tfetd/errors.hpp"

namespace tfetd {

/// Node/weight pairs for integrals over [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Quadrature plan for the fractional operators.
///
/// Singular kernels r^e (e > -1) on the final subinterval are integrated with
/// a Gauss-Jacobi rule that carries the weight exactly; everything else uses
/// composite Gauss-Legendre panels no wider than `panel_width`. Stiffness
/// integrals over an element use a geometrically graded Legendre rule with
/// `grading_levels` panels towards each element end.
struct QuadratureRule {
  int legendre_nodes = 12;
  int jacobi_nodes = 24;
  double panel_width = 0.125;
  int grading_levels = 22;
  double grading_ratio = 0.25;
  double adaptive_tol = 1e-10;

  void validate() const {
    if (legendre_nodes < 4 || jacobi_nodes < 4) {
      throw ConfigError("QuadratureRule: node counts must be >= 4");
    }
    if (!(panel_width > 0.0) || !(grading_ratio > 0.0 && grading_ratio < 1.0) ||
        grading_levels < 0 || !(adaptive_tol > 0.0)) {
      throw ConfigError("QuadratureRule: invalid panel or grading parameters");
    }
  }
};

namespace detail {

/// Golub-Welsch for the Jacobi weight (1-u)^a (1+u)^b on [-1, 1], mapped to
/// t = (1+u)/2 on [0, 1]. The returned weights integrate against
/// (1-t)^a t^b.
inline GaussRule golub_welsch_jacobi(int n, double a, double b) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) /
             (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw QuadratureError("Gauss-Jacobi: eigenvalue iteration failed");
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Weight scaling from [-1,1] to [0,1]: factor 2^{-(a+b+1)}.
  const double scale = std::exp(-(ab + 1.0) * std::log(2.0));
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[k] = 0.5 * (1.0 + solver.eigenvalues()(k));
    rule.weights[k] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

/// Gauss-Legendre via Newton iteration on P_n; more accurate than
/// Golub-Welsch for the weights.
inline GaussRule newton_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

template <typename Key>
const GaussRule& memoized(const Key& key, std::function<GaussRule()> make) {
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<GaussRule>(make())).first;
  }
  return *it->second;
}

}  // namespace detail

/// n-point Gauss-Legendre on [0, 1]. Cached; the reference stays valid.
inline const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  return detail::memoized<int>(n, [n] { return detail::newton_legendre(n); });
}

/// n-point Gauss-Jacobi for the weight t^e on [0, 1], e > -1.
inline const GaussRule& gauss_jacobi(int n, double e) {
  if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
  if (!(e > -1.0)) throw DomainError("gauss_jacobi: exponent must exceed -1");
  return detail::memoized<std::pair<int, double>>(
      {n, e}, [n, e] { return detail::golub_welsch_jacobi(n, 0.0, e); });
}

/// Composite rule on [0, 1] with geometric refinement towards both ends:
/// panels [0, q^L/2], [q^L/2, q^{L-1}/2], ..., [q/2, 1/2] and the mirror
/// image, each carrying an n-point Legendre rule. Symmetric under t -> 1 - t.
inline GaussRule graded_rule(int n, double ratio, int levels) {
  const GaussRule& gl = gauss_legendre(n);
  std::vector<double> cuts{0.0};
  for (int l = levels; l >= 1; --l) cuts.push_back(0.5 * std::pow(ratio, l));
  cuts.push_back(0.5);
  GaussRule half;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double w = cuts[p + 1] - cuts[p];
    for (std::size_t k = 0; k < gl.size(); ++k) {
      half.nodes.push_back(a + w * gl.nodes[k]);
      half.weights.push_back(w * gl.weights[k]);
    }
  }
  GaussRule rule;
  const std::size_t m = half.size();
  rule.nodes.resize(2 * m);
  rule.weights.resize(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    rule.nodes[k] = half.nodes[k];
    rule.weights[k] = half.weights[k];
    // Mirror computed as 1 - t on the node itself so that reversed index
    // lookups land on bitwise-mirrored points.
    rule.nodes[2 * m - 1 - k] = 1.0 - half.nodes[k];
    rule.weights[2 * m - 1 - k] = half.weights[k];
  }
  return rule;
}

/// Reference integrator: globally adaptive Gauss-Kronrod (7/15) bisection.
/// Used by tests, validation and fixture generation only.
class AdaptiveIntegrator {
 public:
  explicit AdaptiveIntegrator(double abs_tol = 1e-10, int max_intervals = 20000)
      : abs_tol_(abs_tol), max_intervals_(max_intervals) {}

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a);
    struct Segment {
      double a, b, value, error;
      bool operator<(const Segment& o) const { return error < o.error; }
    };
    std::priority_queue<Segment> heap;
    auto eval = [&](double lo, double hi) {
      auto [v, e] = kronrod(f, lo, hi);
      return Segment{lo, hi, v, e};
    };
    Segment first = eval(a, b);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int count = 1;
    while (total_err > abs_tol_) {
      Segment worst = heap.top();
      const double mid = 0.5 * (worst.a + worst.b);
      if (count >= max_intervals_ || !(mid > worst.a && mid < worst.b)) {
        throw QuadratureError("adaptive quadrature: tolerance " +
                              std::to_string(abs_tol_) +
                              " not reached, estimate " +
                              std::to_string(total_err));
      }
      heap.pop();
      Segment left = eval(worst.a, mid);
      Segment right = eval(mid, worst.b);
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++count;
      if (count % 256 == 0) {
        // Re-sum to stop drift in the running totals.
        auto copy = heap;
        total = 0.0;
        total_err = 0.0;
        while (!copy.empty()) {
          total += copy.top().value;
          total_err += copy.top().error;
          copy.pop();
        }
      }
    }
    return total;
  }

  double tolerance() const { return abs_tol_; }

 private:
  template <typename F>
  static std::pair<double, double> kronrod(F& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7];
    double g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
      const double f1 = f(c - h * xgk[j]);
      const double f2 = f(c + h * xgk[j]);
      k += wgk[j] * (f1 + f2);
      if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
    }
    const double err = std::abs((k - g) * h);
    return {k * h, err};
  }

  double abs_tol_;
  int max_intervals_;
};

}  // namespace tfetd
