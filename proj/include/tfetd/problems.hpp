#pragma once

// Benchmark problems for u_t - L u = f(x, t, u) on [0, 1] with homogeneous
// Dirichlet data, L the Riesz-tempered operator.
//
// Sources are manufactured: every example with a closed-form solution has
// the form u = X(x) e^{-t}, so
//
//   f(x, t, u) = N(u) + e^{-t} (-X(x) - (L X)(x)) - N(X(x) e^{-t})
//
// reproduces u exactly, and (L X) only has to be evaluated once per node.
// The printed closed-form sources are kept as literal transcriptions for
// cross-checking.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/fem.hpp"
#include "tfetd/field.hpp"
#include "tfetd/parallel.hpp"
#include "tfetd/params.hpp"
#include "tfetd/quadrature.hpp"
#include "tfetd/specfun.hpp"
#include "tfetd/tfrac.hpp"

namespace tfetd {

enum class ExampleId { Linear1 = 1, Nonlinear2 = 2, Nonsmooth3 = 3 };

/// Pointwise reaction term N(u) and its derivative.
struct Reaction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

inline Reaction square_reaction() {
  return Reaction{[](double u) { return u * u; }, [](double u) { return 2.0 * u; }};
}

class ManufacturedSource {
 public:
  ManufacturedSource(std::string tag, Polynomial profile, TemperedParams p,
                     std::optional<Reaction> reaction = std::nullopt, QuadratureRule rule = {})
      : tag_(std::move(tag)),
        profile_(std::move(profile)),
        params_(p),
        reaction_(std::move(reaction)),
        ops_(ScalarField::polynomial(profile_), p.lambda, rule) {}

  const std::string& tag() const { return tag_; }
  const TemperedParams& params() const { return params_; }
  const std::optional<Reaction>& reaction() const { return reaction_; }
  const Polynomial& profile_polynomial() const { return profile_; }

  double profile(double x) const { return profile_(x); }

  /// (L X)(x) through the production quadrature.
  double operator_profile(double x) const { return apply_riesz_tempered(ops_, params_, x); }

  /// Source value given a precomputed (L X)(x).
  double value(double x, double t, double u, double lx) const {
    const double decay = std::exp(-t);
    const double X = profile_(x);
    double f = decay * (-X - lx);
    if (reaction_) f += reaction_->value(u) - reaction_->value(X * decay);
    return f;
  }

  double value(double x, double t, double u) const { return value(x, t, u, operator_profile(x)); }

  /// (L X) at all mesh nodes x_0 .. x_N. With a non-empty cache directory the vector
  /// is read from, or written to, a plain-text file keyed by (tag, N, alpha,
  /// lambda); a file whose header does not match is recomputed.
  Eigen::VectorXd nodal_operator_profile(const Mesh1D& mesh, int threads = 1,
                                         const std::filesystem::path& cache_dir = {}) const {
    const int n = mesh.n_elements + 1;
    const std::string header = cache_header(mesh);
    std::filesystem::path file;
    if (!cache_dir.empty()) {
      file = cache_dir / cache_name(mesh);
      if (auto cached = read_cache(file, header, n)) return *cached;
    }
    Eigen::VectorXd lx(n);
    parallel_for(0, n, threads, [&](std::ptrdiff_t i) {
      lx(i) = operator_profile(mesh.node(static_cast<int>(i)));
    });
    if (!file.empty()) write_cache(file, header, lx);
    return lx;
  }

  /// Load moments int_0^1 (L X)(x) phi_j(x) dx for the interior hats. L X is
  /// smooth inside (0, 1) but behaves like a fractional power at the walls,
  /// so the two boundary elements use the graded rule and the others plain
  /// Gauss-Legendre. Cached like nodal_operator_profile.
  Eigen::VectorXd operator_load(const Mesh1D& mesh, int threads = 1,
                                const std::filesystem::path& cache_dir = {}) const {
    const int n = mesh.dofs();
    const std::string header = cache_header(mesh) + " kind=load";
    std::filesystem::path file;
    if (!cache_dir.empty()) {
      file = cache_dir / ("load_" + cache_name(mesh));
      if (auto cached = read_cache(file, header, n)) return *cached;
    }
    const QuadratureRule& r = ops_.rule();
    const GaussRule& inner = gauss_legendre(r.legendre_nodes);
    const GaussRule edge = graded_rule(r.legendre_nodes, r.grading_ratio, r.grading_levels);
    const int N = mesh.n_elements;
    // Element e feeds the hat at its lower node (weight 1 - t) and the hat
    // at its upper node (weight t).
    std::vector<double> to_lower(N, 0.0);
    std::vector<double> to_upper(N, 0.0);
    parallel_for(0, N, threads, [&](std::ptrdiff_t idx) {
      const int e = static_cast<int>(idx);
      const GaussRule& g = (e == 0 || e == N - 1) ? edge : inner;
      double a = 0.0;
      double b = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = g.nodes[k];
        const double v = g.weights[k] * operator_profile((e + t) * mesh.h);
        a += v * (1.0 - t);
        b += v * t;
      }
      to_lower[e] = a * mesh.h;
      to_upper[e] = b * mesh.h;
    });
    Eigen::VectorXd load(n);
    for (int j = 0; j < n; ++j) load(j) = to_upper[j] + to_lower[j + 1];
    if (!file.empty()) write_cache(file, header, load);
    return load;
  }

 private:
  std::string cache_name(const Mesh1D& mesh) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "lx_%s_N%d_a%.6g_l%.6g.txt", tag_.c_str(), mesh.n_elements,
                  params_.alpha, params_.lambda);
    return buf;
  }

  std::string cache_header(const Mesh1D& mesh) const {
    const QuadratureRule& r = ops_.rule();
    std::ostringstream os;
    os << std::setprecision(17) << "# tfetd nodal operator cache v2 tag=" << tag_
       << " N=" << mesh.n_elements << " alpha=" << params_.alpha << " lambda=" << params_.lambda
       << " jacobi=" << r.jacobi_nodes << " legendre=" << r.legendre_nodes
       << " panel=" << r.panel_width << " tol=" << r.adaptive_tol;
    return os.str();
  }

  static std::optional<Eigen::VectorXd> read_cache(const std::filesystem::path& file,
                                                   const std::string& header, int n) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != header) return std::nullopt;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      if (!(in >> v(i))) return std::nullopt;
    }
    double extra;
    if (in >> extra) return std::nullopt;
    return v;
  }

  static void write_cache(const std::filesystem::path& file, const std::string& header,
                          const Eigen::VectorXd& v) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw Error("cannot write cache file " + tmp.string());
      out << header << '\n' << std::setprecision(17);
      for (int i = 0; i < v.size(); ++i) out << v(i) << '\n';
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw Error("cannot move cache file into place: " + file.string());
  }

  std::string tag_;
  Polynomial profile_;
  TemperedParams params_;
  std::optional<Reaction> reaction_;
  FieldOperators ops_;
};

struct BenchmarkProblem {
  ExampleId id = ExampleId::Linear1;
  TemperedParams params;
  ScalarField initial;
  /// Closed-form solution u(x, t); empty when none is known.
  std::function<double(double, double)> exact;
  /// Null means f = 0.
  std::shared_ptr<const ManufacturedSource> source;
  double series_tol = 1e-14;

  bool has_exact() const { return static_cast<bool>(exact); }
  bool nonlinear() const { return source && source->reaction().has_value(); }

  double source_value(double x, double t, double u) const {
    return source ? source->value(x, t, u) : 0.0;
  }

  std::string name() const { return "example" + std::to_string(static_cast<int>(id)); }
};

inline ExampleId parse_example_id(int k) {
  if (k < 1 || k > 3) throw ConfigError("example must be 1, 2 or 3, got " + std::to_string(k));
  return static_cast<ExampleId>(k);
}

/// Amplitude -2 lambda^{6-alpha} cos(pi alpha / 2) Gamma(-alpha) of the
/// first example's solution.
inline double example1_amplitude(const TemperedParams& p) {
  return -2.0 * std::pow(p.lambda, 6.0 - p.alpha) * std::cos(std::numbers::pi * p.alpha / 2.0) *
         specfun::gamma_fn(-p.alpha);
}

namespace detail {

inline std::shared_ptr<const ManufacturedSource> example1_source(const TemperedParams& p,
                                                                  const QuadratureRule& rule) {
  const Polynomial X = Polynomial::power_product(3, 3).scaled(example1_amplitude(p));
  return std::make_shared<ManufacturedSource>("ex1", X, p, std::nullopt, rule);
}

inline void require_positive_lambda(const TemperedParams& p, const char* who) {
  if (!(p.lambda > 0.0)) {
    throw DomainError(std::string(who) + ": needs lambda > 0 (the solution scales as "
                      "lambda^(6 - alpha))");
  }
}

}  // namespace detail

/// Linear problem with u = A e^{-t} x^3 (1-x)^3, A = example1_amplitude(p).
inline BenchmarkProblem example1(const TemperedParams& p, const QuadratureRule& rule = {}) {
  detail::require_positive_lambda(p, "example1");
  BenchmarkProblem prob;
  prob.id = ExampleId::Linear1;
  prob.params = p;
  prob.source = detail::example1_source(p, rule);
  const Polynomial X = prob.source->profile_polynomial();
  prob.initial = ScalarField::polynomial(X);
  prob.exact = [X](double x, double t) { return X(x) * std::exp(-t); };
  return prob;
}

/// Nonlinear problem with u = x^2 (1-x)^2 e^{-t} and reaction u^2.
inline BenchmarkProblem example2(const TemperedParams& p, double series_tol = 1e-14,
                                 const QuadratureRule& rule = {}) {
  if (!(series_tol > 0.0)) throw DomainError("example2: series_tol must be positive");
  BenchmarkProblem prob;
  prob.id = ExampleId::Nonlinear2;
  prob.params = p;
  prob.series_tol = series_tol;
  const Polynomial X = Polynomial::power_product(2, 2);
  prob.source = std::make_shared<ManufacturedSource>("ex2", X, p, square_reaction(), rule);
  prob.initial = ScalarField::polynomial(X);
  prob.exact = [X](double x, double t) { return X(x) * std::exp(-t); };
  return prob;
}

/// Box initial data on [0.25, 0.75) with the first example's source.
inline BenchmarkProblem example3(const TemperedParams& p, const QuadratureRule& rule = {}) {
  detail::require_positive_lambda(p, "example3");
  BenchmarkProblem prob;
  prob.id = ExampleId::Nonsmooth3;
  prob.params = p;
  prob.source = detail::example1_source(p, rule);
  const double breaks[] = {0.0, 0.25, 0.75, 1.0};
  const double values[] = {0.0, 1.0, 0.0};
  prob.initial = ScalarField::piecewise_constant(breaks, values);
  return prob;
}

inline BenchmarkProblem make_example(ExampleId id, const TemperedParams& p,
                                     const QuadratureRule& rule = {}) {
  switch (id) {
    case ExampleId::Linear1:
      return example1(p, rule);
    case ExampleId::Nonlinear2:
      return example2(p, 1e-14, rule);
    case ExampleId::Nonsmooth3:
      return example3(p, rule);
  }
  throw ConfigError("unknown example");
}

/// The first example's source exactly as printed: the leading term plus
/// e^{-t} (g1 + lambda [g2 + g3 + g5 + g6 + g7] + g8 + g9). The printed sum
/// also names a g4 that is never defined; it is omitted.
inline double example1_printed_source(const TemperedParams& p, double x, double t) {
  detail::require_positive_lambda(p, "example1_printed_source");
  const double a = p.alpha;
  const double l = p.lambda;
  const double xl = x * l;
  const double yl = l - x * l;
  auto G = [](double z, double y) { return specfun::lower_incomplete_gamma(z, y); };
  auto pw = [](double b, int k) { return std::pow(b, k); };

  const double g1 = 3 * pw(l, 5) * pw(x - 1, 2) * pw(x, 2) * (2 * x - 1) * G(1 - a, xl);
  const double g2 = -pw(l, 5) * pw(x, 6) * G(-a, xl) + 3 * pw(l, 5) * pw(x, 5) * G(-a, xl) -
                    3 * pw(l, 5) * pw(x, 4) * G(-a, xl) - 15 * pw(l, 3) * pw(x, 4) * G(2 - a, yl) +
                    pw(l, 5) * pw(x, 3) * G(-a, xl) -
                    pw(l, 5) * pw(x - 1, 3) * pw(x, 3) * G(-a, yl) +
                    30 * pw(l, 3) * pw(x, 3) * G(2 - a, yl);
  const double g3 = 20 * pw(l, 2) * pw(x, 3) * G(3 - a, xl) -
                    20 * pw(l, 2) * pw(x, 3) * G(3 - a, yl) -
                    30 * pw(l, 2) * pw(x, 2) * G(3 - a, xl) -
                    3 * pw(l, 4) * pw(x - 1, 2) * (2 * x - 1) * pw(x, 2) * G(1 - a, yl) -
                    18 * pw(l, 3) * pw(x, 2) * G(2 - a, yl) +
                    30 * pw(l, 2) * pw(x, 2) * G(3 - a, yl);
  const double g5 = -15 * l * pw(x, 2) * G(4 - a, xl) -
                    3 * pw(l, 3) * (x - 1) * (5 * (x - 1) * x + 1) * x * G(2 - a, xl) -
                    15 * l * pw(x, 2) * G(4 - a, yl);
  const double g6 = 3 * pw(l, 3) * x * G(2 - a, yl) + 12 * pw(l, 2) * x * G(3 - a, xl) -
                    12 * pw(l, 2) * x * G(3 - a, yl) - pw(l, 2) * G(3 - a, xl) +
                    pw(l, 2) * G(3 - a, yl) + 15 * l * x * G(4 - a, xl) +
                    15 * l * x * G(4 - a, yl);
  const double g7 = 6 * x * G(5 - a, xl) - 6 * x * G(5 - a, yl) - 3 * l * G(4 - a, xl) -
                    3 * l * G(4 - a, yl) - 3 * G(5 - a, xl) + 3 * G(5 - a, yl);
  const double g8 = 2 * specfun::gamma_fn(2 - a) *
                    (pw(a, 4) - 14 * pw(a, 3) + 71 * pw(a, 2) - 154 * a +
                     3 * (a - 3) * (a - 2) * pw(l, 2) * (5 * (x - 1) * x + 1) +
                     3 * pw(l, 4) * (x - 1) * x * (5 * (x - 1) * x + 1) + 120);
  const double g9 = -G(6 - a, xl) - G(6 - a, yl);

  const double lead = 2 * std::pow(l, 6 - a) * std::cos(std::numbers::pi * a / 2) *
                      specfun::gamma_fn(-a) * std::exp(-t) * pw(x, 3) * pw(1 - x, 3);
  return lead + std::exp(-t) * (g1 + l * (g2 + g3 + g5 + g6 + g7) + g8 + g9);
}

namespace detail {

inline constexpr int kMaxSeriesTerms = 10000;
inline constexpr double kSecondExampleCoeffs[3] = {1.0, -2.0, 1.0};  // x^2, x^3, x^4

/// sum_k sum_{m=2..4} A_m lambda^k Gamma(k+m+1) / (k! Gamma(denom(k, m))) y^{power(k, m)}
template <typename Denom, typename Power>
double second_example_series(double lambda, double y, double tol, Denom denom, Power power) {
  if (y == 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    double term = 0.0;
    for (int j = 0; j < 3; ++j) {
      const int m = j + 2;
      int sign = 1;
      const double log_denom = specfun::log_gamma(denom(k, m), &sign);
      double log_mag = specfun::log_gamma(k + m + 1.0) - specfun::log_gamma(k + 1.0) -
                       log_denom + power(k, m) * std::log(y);
      if (k > 0) {
        if (lambda == 0.0) return sum;
        log_mag += k * std::log(lambda);
      }
      term += kSecondExampleCoeffs[j] * sign * std::exp(log_mag);
    }
    sum += term;
    if (!std::isfinite(sum)) throw SeriesError("series overflowed at term " + std::to_string(k));
    if (k > lambda * y && std::abs(term) <= tol * std::max(1.0, std::abs(sum))) return sum;
  }
  throw SeriesError("series did not converge within " + std::to_string(kMaxSeriesTerms) +
                    " terms");
}

}  // namespace detail

/// (L X)(x) for X = x^2 (1-x)^2 from the power series of e^{lambda x} X:
///   D_+ X(x) = e^{-lambda x} sum_k sum_m A_m lambda^k Gamma(k+m+1)
///              / (k! Gamma(k+m+1-alpha)) x^{k+m-alpha},
/// and D_- X(x) = D_+ X(1 - x) by symmetry of X.
inline double example2_operator_series(const TemperedParams& p, double x, double tol = 1e-14) {
  const double a = p.alpha;
  auto denom = [a](int k, int m) { return k + m + 1.0 - a; };
  auto power = [a](int k, int m) { return k + m - a; };
  auto left = [&](double y) {
    return std::exp(-p.lambda * y) * detail::second_example_series(p.lambda, y, tol, denom, power);
  };
  const double X = x * x * (1 - x) * (1 - x);
  return p.c_alpha * (left(x) + left(1.0 - x) - 2.0 * p.lambda_pow_alpha() * X);
}

/// The second example's source exactly as printed, with H and H-bar summed
/// as written (denominator Gamma(m+1-alpha), exponents k+m and k+m-alpha,
/// prefactors e^{-lambda x} and e^{-lambda (x+1)}). Throws SeriesError where
/// the printed series diverges (lambda x >= 1 or lambda (1-x) >= 1).
inline double example2_printed_source(const TemperedParams& p, double x, double t, double u,
                                    double tol = 1e-14) {
  const double a = p.alpha;
  const double l = p.lambda;
  auto denom = [a](int, int m) { return m + 1.0 - a; };
  const double H = detail::second_example_series(
      l, x, tol, denom, [](int k, int m) { return static_cast<double>(k + m); });
  const double Hbar = detail::second_example_series(
      l, 1.0 - x, tol, denom, [a](int k, int m) { return k + m - a; });
  const double X = x * x * (1 - x) * (1 - x);
  const double e = std::exp(-t);
  return u * u - X * e - X * X * e * e +
         e / (2.0 * std::cos(a * std::numbers::pi / 2.0)) *
             (std::exp(-l * x) * H + std::exp(-l * (x + 1.0)) * Hbar -
              2.0 * p.lambda_pow_alpha() * X);
}

}  // namespace tfetd
