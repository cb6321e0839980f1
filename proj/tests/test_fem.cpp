#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "tfetd/fem.hpp"
#include "tfetd/oracle.hpp"
#include "tfetd/parallel.hpp"
#include "tfetd/spectral.hpp"
#include "tfetd/system.hpp"

using namespace tfetd;

TEST(Mesh, Construction) {
  const Mesh1D m = Mesh1D::make(8);
  EXPECT_EQ(m.dofs(), 7);
  EXPECT_DOUBLE_EQ(m.h, 0.125);
  EXPECT_DOUBLE_EQ(m.interior_nodes()(0), 0.125);
  EXPECT_DOUBLE_EQ(m.interior_nodes()(6), 0.875);
  EXPECT_THROW(Mesh1D::make(1), DomainError);
  EXPECT_DOUBLE_EQ(m.basis(3)(0.375), 1.0);
  EXPECT_DOUBLE_EQ(m.basis(3)(0.25), 0.0);
}

TEST(Mass, ClosedFormEntries) {
  const Eigen::MatrixXd P = assemble_mass(Mesh1D::make(4));
  ASSERT_EQ(P.rows(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(P(i, i), 2.0 * 0.25 / 3.0, 1e-16);
  EXPECT_NEAR(P(0, 1), 0.25 / 6.0, 1e-16);
  EXPECT_NEAR(P(1, 0), 0.25 / 6.0, 1e-16);
  EXPECT_EQ(P(0, 2), 0.0);
}

TEST(Mass, InteriorRowSumsAreH) {
  const Mesh1D m = Mesh1D::make(16);
  const Eigen::MatrixXd P = assemble_mass(m);
  for (int i = 1; i + 1 < m.dofs(); ++i) EXPECT_NEAR(P.row(i).sum(), m.h, 1e-15);
}

TEST(Mass, TwoElements) {
  const Eigen::MatrixXd P = assemble_mass(Mesh1D::make(2));
  ASSERT_EQ(P.rows(), 1);
  EXPECT_NEAR(P(0, 0), 1.0 / 3.0, 1e-16);
}

// Adaptive double-quadrature values (about 1e-13 apart from assembly).
TEST(Stiffness, FrozenOracleFixture) {
  const Eigen::MatrixXd G = assemble_stiffness(Mesh1D::make(4), TemperedParams::make(1.6, 1.0));
  const double diag = 2.7763689987104043;
  const double first = -1.2041558893997646;
  const double second = -0.14815290154137722;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(G(i, i), diag, 1e-8);
  EXPECT_NEAR(G(0, 1), first, 1e-8);
  EXPECT_NEAR(G(1, 2), first, 1e-8);
  EXPECT_NEAR(G(0, 2), second, 1e-8);
}

TEST(Stiffness, MatchesOracleAtRandomEntries) {
  const TemperedParams p = TemperedParams::make(1.3, 2.0);
  const Eigen::MatrixXd G = assemble_stiffness(Mesh1D::make(8), p);
  for (auto [i, j] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{1, 7}}) {
    EXPECT_NEAR(G(i - 1, j - 1), oracle::stiffness_entry(8, p, i, j), 1e-8) << i << "," << j;
  }
}

TEST(Stiffness, ClassicalLimit) {
  const Mesh1D m = Mesh1D::make(8);
  const Eigen::MatrixXd G = assemble_stiffness(m, TemperedParams::make(1.999, 1e-8));
  const double h = m.h;
  const double big = 2.0 / h;
  for (int i = 0; i < m.dofs(); ++i) {
    for (int j = 0; j < m.dofs(); ++j) {
      const int d = std::abs(i - j);
      const double k = d == 0 ? 2.0 / h : d == 1 ? -1.0 / h : 0.0;
      const double scale = k != 0.0 ? std::abs(k) : big;
      EXPECT_NEAR(G(i, j), k, 0.01 * scale) << i << "," << j;
    }
  }
}

TEST(Stiffness, SymmetricToeplitzPositiveDefinite) {
  for (double a : {1.2, 1.5, 1.9}) {
    const Eigen::MatrixXd G = assemble_stiffness(Mesh1D::make(16), TemperedParams::make(a, 1.0));
    EXPECT_LE((G - G.transpose()).cwiseAbs().maxCoeff(), 1e-13 * G.cwiseAbs().maxCoeff());
    EXPECT_NEAR(G(2, 5), G(7, 10), 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << a;
  }
}

TEST(Stiffness, ThreadCountDoesNotChangeResult) {
  const TemperedParams p = TemperedParams::make(1.7, 0.5);
  const Eigen::MatrixXd a = assemble_stiffness(Mesh1D::make(32), p, {}, 1);
  const Eigen::MatrixXd b = assemble_stiffness(Mesh1D::make(32), p, {}, 4);
  EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Stiffness, BadRuleRejected) {
  QuadratureRule r;
  r.legendre_nodes = 1;
  EXPECT_THROW(assemble_stiffness(Mesh1D::make(4), TemperedParams::make(1.5, 1.0), r),
               ConfigError);
}

TEST(Operator, DefiningRelation) {
  const auto op = assemble_operator(Mesh1D::make(4), TemperedParams::make(1.6, 1.0));
  EXPECT_LE((op->P * op->B - op->G).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Operator, SpectrumIsPositive) {
  const auto op = assemble_operator(Mesh1D::make(8), TemperedParams::make(1.6, 1.0));
  const Eigen::VectorXd mu = eigenvalues_of_b(*op);
  EXPECT_NEAR(mu.minCoeff(), 4.2960823794451608, 1e-9);
  EXPECT_GT(mu.minCoeff(), 0.0);
}

TEST(Tridiagonal, SolvesAndRejectsIndefinite) {
  const Eigen::MatrixXd P = assemble_mass(Mesh1D::make(10));
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -1.0, 2.0);
  Eigen::VectorXd b = P * x;
  TridiagonalSpd(P).solve_in_place(b);
  EXPECT_LE((b - x).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_THROW(TridiagonalSpd(-P), SolveError);
}

TEST(Parallel, CoversRangeAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(0, 100, 3, [&](std::ptrdiff_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(0, 10, 2,
                            [](std::ptrdiff_t i) {
                              if (i == 7) throw SolveError("boom");
                            }),
               SolveError);
}

TEST(MatrixCsv, RoundTripsDigits) {
  const auto path = std::filesystem::temp_directory_path() / "tfetd_matrix_test.csv";
  Eigen::MatrixXd M(2, 2);
  M << 1.0 / 3.0, -2.5, 1e-17, 4.0;
  write_matrix_csv(path.string(), M);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(std::stod(line.substr(0, line.find(','))), 1.0 / 3.0);
  std::filesystem::remove(path);
}
