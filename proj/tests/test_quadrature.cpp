#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "tfetd/quadrature.hpp"

using namespace tfetd;

namespace {

double apply(const GaussRule& r, auto&& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * f(r.nodes[k]);
  return s;
}

}  // namespace

TEST(GaussLegendre, ExactForHighPolynomials) {
  for (int n : {4, 8, 12, 24}) {
    const GaussRule& r = gauss_legendre(n);
    ASSERT_EQ(r.size(), static_cast<std::size_t>(n));
    for (int d = 0; d < 2 * n; ++d) {
      EXPECT_NEAR(apply(r, [d](double t) { return std::pow(t, d); }), 1.0 / (d + 1), 1e-14)
          << "n=" << n << " d=" << d;
    }
  }
}

TEST(GaussLegendre, CachedRulesAreStable) {
  const GaussRule& a = gauss_legendre(12);
  const GaussRule& b = gauss_legendre(12);
  EXPECT_EQ(&a, &b);
}

// int_0^1 t^e t^d dt = 1 / (e + d + 1)
TEST(GaussJacobi, CarriesEndpointWeight) {
  for (double e : {-0.6, -0.2, 0.4}) {
    const GaussRule& r = gauss_jacobi(16, e);
    for (int d = 0; d < 20; ++d) {
      EXPECT_NEAR(apply(r, [d](double t) { return std::pow(t, d); }), 1.0 / (e + d + 1.0), 1e-13)
          << e << " " << d;
    }
  }
}

TEST(GradedRule, SymmetricAndExact) {
  const GaussRule r = graded_rule(12, 0.25, 10);
  const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
  EXPECT_NEAR(total, 1.0, 1e-14);
  const std::size_t m = r.size() / 2;
  for (std::size_t k = 0; k < m; ++k) {
    EXPECT_EQ(r.nodes[r.size() - 1 - k], 1.0 - r.nodes[k]);
    EXPECT_EQ(r.weights[k], r.weights[r.size() - 1 - k]);
  }
  EXPECT_NEAR(apply(r, [](double t) { return std::pow(t, 7); }), 0.125, 1e-14);
}

TEST(GradedRule, ResolvesEndpointSingularity) {
  // int_0^1 t^{-0.4} dt = 1/0.6
  const GaussRule r = graded_rule(12, 0.25, 22);
  EXPECT_NEAR(apply(r, [](double t) { return std::pow(t, -0.4); }), 1.0 / 0.6, 1e-9);
}

TEST(Adaptive, SmoothAndSingular) {
  const AdaptiveIntegrator q(1e-12);
  EXPECT_NEAR(q.integrate([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1.0,
              1e-13);
  EXPECT_NEAR(q.integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0), 2.0 / 3.0, 1e-11);
  EXPECT_EQ(q.integrate([](double) { return 1.0; }, 0.3, 0.3), 0.0);
}

TEST(Adaptive, FailsLoudlyWhenBudgetExhausted) {
  const AdaptiveIntegrator q(1e-14, 4);
  EXPECT_THROW(q.integrate([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0),
               QuadratureError);
}

TEST(QuadratureRuleConfig, Validation) {
  QuadratureRule r;
  EXPECT_NO_THROW(r.validate());
  r.legendre_nodes = 2;
  EXPECT_THROW(r.validate(), ConfigError);
  r = QuadratureRule{};
  r.grading_ratio = 1.0;
  EXPECT_THROW(r.validate(), ConfigError);
}
