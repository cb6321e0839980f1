#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tfetd/harness.hpp"

using namespace tfetd;

namespace {

std::string strip_timing(const std::string& csv) {
  // drop wall_time_s (column 7)
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k != 6) out += cols[k] + ",";
    }
    out += "\n";
  }
  return out;
}

RunConfig small_grid(ExampleId id) {
  RunConfig c = RunConfig::default_grid(id, 3);
  c.alphas = {1.6};
  return c;
}

}  // namespace

TEST(Errors, RelativeMaxNorm) {
  Eigen::VectorXd u(2), v(2);
  u << 2, 4;
  v << 2, 3;
  EXPECT_DOUBLE_EQ(rel_linf_error(u, v), 0.25);
  EXPECT_EQ(rel_linf_error(u, u), 0.0);
  EXPECT_THROW(rel_linf_error(Eigen::VectorXd::Zero(2), v), DomainError);
  EXPECT_THROW(rel_linf_error(u, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST(Errors, ObservedOrder) {
  EXPECT_DOUBLE_EQ(observed_order(4e-3, 1e-3), 2.0);
  EXPECT_DOUBLE_EQ(observed_order(8e-3, 4e-3), 1.0);
  EXPECT_NEAR(observed_order(2.3e-3, 5.4680e-4), 2.07254, 1e-4);
  EXPECT_THROW(observed_order(0.0, 1e-3), DomainError);
  EXPECT_THROW(observed_order(1e-3, -1.0), DomainError);
}

TEST(Report, RefusesMisalignedTaus) {
  EXPECT_THROW(require_halvings({0.25, 0.125, 0.1}), ConfigError);
  EXPECT_NO_THROW(require_halvings({0.25, 0.125, 0.0625}));
  ConvergenceReport r;
  ConvergenceRow a, b;
  a.tau = 0.25;
  a.error = 1e-2;
  b.tau = 0.1;
  b.error = 1e-3;
  r.rows = {a, b};
  EXPECT_THROW(r.compute_orders(), ConfigError);
}

TEST(Report, OrdersOnlyWithinAlphaAndScheme) {
  ConvergenceReport r;
  ConvergenceRow a;
  a.alpha = 1.5;
  a.tau = 0.5;
  a.error = 4e-3;
  ConvergenceRow b = a;
  b.tau = 0.25;
  b.error = 1e-3;
  ConvergenceRow c = a;
  c.scheme = Scheme::Cn;
  r.rows = {a, b, c};
  r.compute_orders();
  EXPECT_TRUE(std::isnan(r.rows[0].order));
  EXPECT_DOUBLE_EQ(r.rows[1].order, 2.0);
  EXPECT_TRUE(std::isnan(r.rows[2].order));
}

TEST(Config, Validation) {
  RunConfig c = RunConfig::default_grid(ExampleId::Linear1);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.n_list, (std::vector<int>{4, 8, 16, 32}));
  c.n_list = {4, 8, 12, 32};
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig::default_grid(ExampleId::Linear1);
  c.n_list.back() = 1024;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig::default_grid(ExampleId::Linear1);
  c.t_end = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig::default_grid(ExampleId::Linear1);
  c.alphas = {2.5};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(RunConfig::default_grid(ExampleId::Linear1, 1), ConfigError);
  const RunConfig box = RunConfig::default_grid(ExampleId::Nonsmooth3);
  EXPECT_FALSE(box.couple_h_tau);
  EXPECT_EQ(box.n_list, std::vector<int>{512});
}

TEST(Convergence, SmoothLinearBothSchemes) {
  const ConvergenceReport r = run_convergence(small_grid(ExampleId::Linear1));
  ASSERT_EQ(r.rows.size(), 6u);
  for (Scheme s : {Scheme::EtdRdp, Scheme::Cn}) {
    const auto rows = r.select(1.6, s);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) EXPECT_TRUE(row.ok) << row.message;
    EXPECT_GT(rows[2].order, 1.7) << scheme_name(s);
    EXPECT_LT(rows[2].order, 2.3) << scheme_name(s);
  }
}

TEST(Convergence, FailedRowsAreRecordedAndRunContinues) {
  RunConfig c = small_grid(ExampleId::Linear1);
  c.lambda = 0.0;  // the first example needs lambda > 0
  const ConvergenceReport r = run_convergence(c);
  ASSERT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.ok);
    EXPECT_FALSE(row.message.empty());
  }
  std::ostringstream csv;
  r.write_csv(csv);
  EXPECT_NE(csv.str().find("failed: "), std::string::npos);
}

TEST(Convergence, DeterministicCsv) {
  RunConfig c = small_grid(ExampleId::Nonlinear2);
  std::ostringstream a, b;
  run_convergence(c).write_csv(a);
  run_convergence(c).write_csv(b);
  EXPECT_EQ(strip_timing(a.str()), strip_timing(b.str()));
  EXPECT_EQ(a.str().rfind("# tfetd convergence csv v1 example=2\n", 0), 0u);
  EXPECT_NE(a.str().find(ConvergenceReport::kCsvColumns), std::string::npos);
}

TEST(Convergence, WritesOneFilePerAlpha) {
  const auto dir = std::filesystem::temp_directory_path() / "tfetd_conv_out";
  std::filesystem::remove_all(dir);
  RunConfig c = small_grid(ExampleId::Linear1);
  c.alphas = {1.4, 1.6};
  c.schemes = {Scheme::EtdRdp};
  const auto paths = run_convergence(c).write_csvs(dir);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / "convergence_1_1.4.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "convergence_1_1.6.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Convergence, FixedMeshNeedsOneSize) {
  RunConfig c = small_grid(ExampleId::Nonsmooth3);
  c.n_list = {64, 128};
  EXPECT_THROW(run_convergence(c), ConfigError);
}

TEST(Convergence, BoxDataAgainstFineStepReference) {
  RunConfig c = small_grid(ExampleId::Nonsmooth3);
  c.n_list = {64};
  c.reference_tau = 1.0 / 256.0;
  c.schemes = {Scheme::EtdRdp};
  const ConvergenceReport r = run_convergence(c);
  for (const auto& row : r.rows) ASSERT_TRUE(row.ok) << row.message;
  EXPECT_GT(r.rows[2].order, 1.5);
}

TEST(Bench, TimingTableShape) {
  RunConfig c;
  c.example = ExampleId::Nonlinear2;
  c.alphas = {1.5};
  c.n_list = {16};
  c.tau_list = {1.0 / 8.0};
  c.repetitions = 1;
  const BenchReport r = run_bench(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_GT(r.rows[0].etd_time, 0.0);
  EXPECT_GT(r.rows[0].cn_time, 0.0);
  EXPECT_GE(r.rows[0].cn_newton_iters, 8);
  BenchRow fake;
  fake.etd_time = 1.0;
  fake.cn_time = 4.0;
  EXPECT_DOUBLE_EQ(fake.improvement(), 75.0);
  c.tau_list = {0.1, 0.05};
  EXPECT_THROW(run_bench(c), ConfigError);
}

TEST(Solve, WritesSolutionCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "tfetd_solve_out";
  std::filesystem::remove_all(dir);
  RunConfig c;
  c.example = ExampleId::Linear1;
  c.n_list = {16};
  c.tau_list = {1.0 / 16.0};
  c.schemes = {Scheme::EtdRdp};
  c.out_dir = dir;
  c.snapshot_every = 4;
  const SolveResult res = run_solve(c);
  ASSERT_TRUE(std::filesystem::exists(res.csv));
  ASSERT_TRUE(std::filesystem::exists(res.snapshot_csv));
  std::ifstream in(res.csv);
  std::string header, columns;
  std::getline(in, header);
  std::getline(in, columns);
  EXPECT_EQ(columns, "x,u_num,u_exact,abs_err");
  // profile proportional to x^3 (1-x)^3: symmetric about 1/2
  const Eigen::VectorXd& u = res.trajectory.final_state();
  EXPECT_NEAR(u(2), u(12), 1e-10);
  std::filesystem::remove_all(dir);
}

TEST(Solve, ZeroEndTimeEchoesInitialData) {
  RunConfig c;
  c.example = ExampleId::Nonsmooth3;
  c.n_list = {8};
  c.tau_list = {0.25};
  c.t_end = 0.0;
  c.schemes = {Scheme::Cn};
  c.out_dir = std::filesystem::temp_directory_path() / "tfetd_solve_zero";
  const SolveResult res = run_solve(c);
  const double expect[7] = {0, 1, 1, 1, 1, 0, 0};
  for (int i = 0; i < 7; ++i) EXPECT_EQ(res.trajectory.final_state()(i), expect[i]);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Solve, BoxDataFirstStepIsDamped) {
  RunConfig c;
  c.example = ExampleId::Nonsmooth3;
  c.n_list = {64};
  c.tau_list = {0.25};
  c.t_end = 0.25;
  c.out_dir = std::filesystem::temp_directory_path() / "tfetd_solve_box";
  c.schemes = {Scheme::EtdRdp};
  const Eigen::VectorXd etd = run_solve(c).trajectory.final_state();
  c.schemes = {Scheme::Cn};
  const Eigen::VectorXd cn = run_solve(c).trajectory.final_state();
  EXPECT_GE(etd.minCoeff(), -0.01);
  EXPECT_LE(etd.maxCoeff(), 1.01);
  auto overshoot = [](const Eigen::VectorXd& u) {
    return std::max(0.0, u.maxCoeff() - 1.0) + std::max(0.0, -u.minCoeff());
  };
  EXPECT_LE(overshoot(etd), overshoot(cn));
  std::filesystem::remove_all(c.out_dir);
}

TEST(Solve, RejectsAmbiguousConfig) {
  RunConfig c;
  c.n_list = {16, 32};
  c.tau_list = {0.1};
  EXPECT_THROW(run_solve(c), ConfigError);
}

TEST(Validate, FreshSuitePasses) {
  const ValidationSummary s = run_validate();
  for (const auto& c : s.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.value;
  EXPECT_TRUE(s.all_pass());
}

TEST(Validate, TamperedSignFailsClassicalLimit) {
  ValidateOptions opt;
  opt.tamper_c_alpha = true;
  const ValidationSummary s = run_validate(opt);
  EXPECT_FALSE(s.all_pass());
  bool classical_failed = false;
  for (const auto& c : s.checks) {
    if (c.name.find("classical limit") != std::string::npos && !c.pass) classical_failed = true;
  }
  EXPECT_TRUE(classical_failed);
}
