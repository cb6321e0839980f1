#pragma once

// Experiment drivers behind the command-line tool: convergence tables,
// timing comparisons, single solves and the validation suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/fem.hpp"
#include "tfetd/identities.hpp"
#include "tfetd/oracle.hpp"
#include "tfetd/problems.hpp"
#include "tfetd/rdp.hpp"
#include "tfetd/report.hpp"
#include "tfetd/spectral.hpp"
#include "tfetd/specfun.hpp"
#include "tfetd/steppers.hpp"
#include "tfetd/system.hpp"

namespace tfetd {

struct RunConfig {
  ExampleId example = ExampleId::Linear1;
  std::vector<double> alphas = {1.6};
  double lambda = 1.0;
  /// Mesh sizes N. With h = tau coupling they pair with tau_list; otherwise
  /// a single N is used for every tau.
  std::vector<int> n_list;
  std::vector<double> tau_list;
  bool couple_h_tau = true;
  /// Reference step for problems without a closed-form solution.
  double reference_tau = 1.0 / 1024.0;
  double t_end = 1.0;
  std::vector<Scheme> schemes = {Scheme::EtdRdp, Scheme::Cn};
  std::filesystem::path out_dir = ".";
  std::filesystem::path cache_dir;
  unsigned seed = 0;
  bool oracle = false;
  int threads = 1;
  int repetitions = 3;
  int snapshot_every = 0;
  SourceLoad load = SourceLoad::Projected;
  QuadratureRule rule;

  static bool power_of_two_in_range(int n) {
    return n >= 4 && n <= 512 && (n & (n - 1)) == 0;
  }

  void validate() const {
    if (alphas.empty()) throw ConfigError("at least one alpha is required");
    for (double a : alphas) {
      if (!(a > 1.0 && a < 2.0)) throw ConfigError("alpha must lie in (1, 2)");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be >= 0");
    for (int n : n_list) {
      if (!power_of_two_in_range(n)) {
        throw ConfigError("mesh sizes must be powers of 2 in [4, 512], got " + std::to_string(n));
      }
    }
    for (double t : tau_list) {
      if (!(t > 0.0)) throw ConfigError("tau must be positive");
    }
    if (schemes.empty()) throw ConfigError("at least one scheme is required");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (!(reference_tau > 0.0)) throw ConfigError("reference tau must be positive");
    rule.validate();
  }

  /// Default grid: h = tau = 1/4 ... 1/(4 * 2^(levels-1)) for the smooth
  /// problems, h = 1/512 fixed with the same taus for the box problem.
  static RunConfig default_grid(ExampleId id, int levels = 4) {
    if (levels < 2 || levels > 8) throw ConfigError("levels must be between 2 and 8");
    RunConfig c;
    c.example = id;
    c.tau_list.clear();
    for (int k = 0; k < levels; ++k) c.tau_list.push_back(1.0 / (4 << k));
    if (id == ExampleId::Nonsmooth3) {
      c.couple_h_tau = false;
      c.n_list = {512};
    } else {
      c.couple_h_tau = true;
      for (double t : c.tau_list) c.n_list.push_back(static_cast<int>(std::lround(1.0 / t)));
    }
    return c;
  }
};

namespace detail {

inline std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

inline SystemOptions system_options(const RunConfig& cfg) {
  SystemOptions o;
  o.threads = cfg.threads;
  o.cache_dir = cfg.cache_dir;
  o.load = cfg.load;
  return o;
}

inline Eigen::VectorXd exact_at_nodes(const BenchmarkProblem& prob, const Mesh1D& mesh, double t) {
  Eigen::VectorXd u(mesh.dofs());
  for (int i = 0; i < mesh.dofs(); ++i) u(i) = prob.exact(mesh.node(i + 1), t);
  return u;
}

}  // namespace detail

/// Convergence table. Each (alpha, level) is assembled once and both
/// schemes run on the same system. A failing row is recorded and the run
/// continues.
inline ConvergenceReport run_convergence(const RunConfig& cfg) {
  cfg.validate();
  if (!(cfg.t_end > 0.0)) throw ConfigError("convergence needs t_end > 0");
  if (cfg.tau_list.size() < 2) throw ConfigError("convergence needs at least two taus");
  require_halvings(cfg.tau_list);
  if (cfg.couple_h_tau && cfg.n_list.size() != cfg.tau_list.size()) {
    throw ConfigError("h = tau coupling needs one mesh size per tau");
  }
  if (!cfg.couple_h_tau && cfg.n_list.size() != 1) {
    throw ConfigError("a fixed-mesh study takes exactly one mesh size");
  }

  ConvergenceReport report;
  report.example = static_cast<int>(cfg.example);
  for (double alpha : cfg.alphas) {
    const std::size_t levels = cfg.tau_list.size();
    std::vector<std::vector<ConvergenceRow>> by_scheme(cfg.schemes.size(),
                                                       std::vector<ConvergenceRow>(levels));
    std::optional<BenchmarkProblem> maybe_prob;
    std::string fixed_failure;
    try {
      maybe_prob = make_example(cfg.example, TemperedParams::make(alpha, cfg.lambda), cfg.rule);
    } catch (const Error& e) {
      fixed_failure = e.what();
    }

    std::optional<SemiDiscreteSystem> fixed;
    Eigen::VectorXd reference;
    if (maybe_prob && !cfg.couple_h_tau) {
      const BenchmarkProblem& prob = *maybe_prob;
      try {
        fixed = build_system(Mesh1D::make(cfg.n_list.front()), prob, cfg.rule,
                             detail::system_options(cfg));
        if (prob.has_exact()) {
          reference = detail::exact_at_nodes(prob, fixed->op->mesh, cfg.t_end);
        } else {
          StepperConfig rc;
          rc.tau = cfg.reference_tau;
          rc.t_end = cfg.t_end;
          reference = integrate(*fixed, rc).final_state();
        }
      } catch (const Error& e) {
        fixed_failure = e.what();
      }
    }

    for (std::size_t lv = 0; lv < levels; ++lv) {
      const double tau = cfg.tau_list[lv];
      const int N = cfg.couple_h_tau ? cfg.n_list[lv] : cfg.n_list.front();
      std::optional<SemiDiscreteSystem> sys;
      Eigen::VectorXd ref;
      std::string failure = fixed_failure;
      if (maybe_prob && cfg.couple_h_tau) {
        const BenchmarkProblem& prob = *maybe_prob;
        try {
          sys = build_system(Mesh1D::make(N), prob, cfg.rule, detail::system_options(cfg));
          if (!prob.has_exact()) {
            throw PreconditionError("h = tau coupling needs a closed-form solution");
          }
          ref = detail::exact_at_nodes(prob, sys->op->mesh, cfg.t_end);
        } catch (const Error& e) {
          failure = e.what();
          sys.reset();
        }
      } else if (fixed) {
        sys = fixed;
        ref = reference;
      }
      for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        ConvergenceRow& row = by_scheme[s][lv];
        row.alpha = alpha;
        row.h = 1.0 / N;
        row.tau = tau;
        row.scheme = cfg.schemes[s];
        if (!sys) {
          row.ok = false;
          row.message = detail::csv_safe(failure);
          continue;
        }
        try {
          StepperConfig sc;
          sc.tau = tau;
          sc.t_end = cfg.t_end;
          sc.scheme = cfg.schemes[s];
          const Trajectory tr = integrate(*sys, sc);
          row.error = rel_linf_error(ref, tr.final_state());
          row.wall_time = tr.wall_time;
          row.newton_iters = tr.newton_iters;
        } catch (const Error& e) {
          row.ok = false;
          row.message = detail::csv_safe(e.what());
        }
      }
    }
    for (auto& rows : by_scheme) {
      for (auto& r : rows) report.rows.push_back(r);
    }
  }
  report.compute_orders();
  return report;
}

struct BenchRow {
  int example = 2;
  double alpha = 0.0;
  int n = 0;
  double tau = 0.0;
  double etd_time = 0.0;
  double cn_time = 0.0;
  long cn_newton_iters = 0;

  /// (1 - t_ETD / t_CN) * 100
  double improvement() const { return (1.0 - etd_time / cn_time) * 100.0; }
};

struct BenchReport {
  std::vector<BenchRow> rows;

  static constexpr const char* kCsvHeader = "# tfetd bench csv v1";

  void write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n'
        << "example,alpha,n,tau,etdrdp_time_s,cn_time_s,improvement_pct,cn_newton_iters\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
      out << r.example << ',' << r.alpha << ',' << r.n << ',' << r.tau << ',' << r.etd_time << ','
          << r.cn_time << ',' << r.improvement() << ',' << r.cn_newton_iters << '\n';
    }
  }
};

/// Median-of-repetitions wall time of factorization plus stepping for both
/// schemes on one shared system per alpha. Assembly is excluded.
inline BenchReport run_bench(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.n_list.size() != 1 || cfg.tau_list.size() != 1) {
    throw ConfigError("bench takes exactly one mesh size and one tau");
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  BenchReport report;
  for (double alpha : cfg.alphas) {
    const TemperedParams p = TemperedParams::make(alpha, cfg.lambda);
    const BenchmarkProblem prob = make_example(cfg.example, p, cfg.rule);
    const SemiDiscreteSystem sys = build_system(Mesh1D::make(cfg.n_list.front()), prob, cfg.rule,
                                                detail::system_options(cfg));
    BenchRow row;
    row.example = static_cast<int>(cfg.example);
    row.alpha = alpha;
    row.n = cfg.n_list.front();
    row.tau = cfg.tau_list.front();
    for (Scheme s : {Scheme::EtdRdp, Scheme::Cn}) {
      std::vector<double> times;
      StepperConfig sc;
      sc.tau = row.tau;
      sc.t_end = cfg.t_end;
      sc.scheme = s;
      long iters = 0;
      for (int r = 0; r < cfg.repetitions; ++r) {
        const Trajectory tr = integrate(sys, sc);
        times.push_back(tr.wall_time);
        iters = tr.newton_iters;
      }
      (s == Scheme::EtdRdp ? row.etd_time : row.cn_time) = median(times);
      if (s == Scheme::Cn) row.cn_newton_iters = iters;
    }
    report.rows.push_back(row);
  }
  return report;
}

struct SolveResult {
  Eigen::VectorXd x;
  Trajectory trajectory;
  /// Empty when the problem has no closed form.
  Eigen::VectorXd exact;
  std::filesystem::path csv;
  std::filesystem::path snapshot_csv;
};

/// Single run; writes solution_<tag>.csv (x, u_num[, u_exact, abs_err]) and,
/// with snapshot_every > 0, solution_<tag>_snapshots.csv (t, x, u_num).
inline SolveResult run_solve(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.alphas.size() != 1 || cfg.n_list.size() != 1 || cfg.tau_list.size() != 1 ||
      cfg.schemes.size() != 1) {
    throw ConfigError("solve takes exactly one alpha, mesh size, tau and scheme");
  }
  const TemperedParams p = TemperedParams::make(cfg.alphas.front(), cfg.lambda);
  const BenchmarkProblem prob = make_example(cfg.example, p, cfg.rule);
  const Mesh1D mesh = Mesh1D::make(cfg.n_list.front());
  const SemiDiscreteSystem sys = build_system(mesh, prob, cfg.rule, detail::system_options(cfg));
  StepperConfig sc;
  sc.tau = cfg.tau_list.front();
  sc.t_end = cfg.t_end;
  sc.scheme = cfg.schemes.front();
  sc.snapshot_every = cfg.snapshot_every;

  SolveResult res;
  res.x = mesh.interior_nodes();
  res.trajectory = integrate(sys, sc);
  if (prob.has_exact()) res.exact = detail::exact_at_nodes(prob, mesh, sc.t_end);

  std::ostringstream tag;
  tag << "ex" << static_cast<int>(cfg.example) << "_a" << p.alpha << "_n" << mesh.n_elements
      << '_' << scheme_name(sc.scheme);
  std::filesystem::create_directories(cfg.out_dir);
  res.csv = cfg.out_dir / ("solution_" + tag.str() + ".csv");
  std::ofstream out(res.csv);
  if (!out) throw Error("cannot write " + res.csv.string());
  out << "# tfetd solution csv v1 t=" << sc.t_end << '\n' << std::setprecision(17);
  out << (prob.has_exact() ? "x,u_num,u_exact,abs_err\n" : "x,u_num\n");
  // Boundary nodes carry the Dirichlet value.
  auto row = [&](double x, double u, double ue) {
    out << x << ',' << u;
    if (prob.has_exact()) out << ',' << ue << ',' << std::abs(u - ue);
    out << '\n';
  };
  const Eigen::VectorXd& U = res.trajectory.final_state();
  row(0.0, 0.0, 0.0);
  for (int i = 0; i < mesh.dofs(); ++i) row(res.x(i), U(i), prob.has_exact() ? res.exact(i) : 0.0);
  row(1.0, 0.0, 0.0);

  if (cfg.snapshot_every > 0) {
    res.snapshot_csv = cfg.out_dir / ("solution_" + tag.str() + "_snapshots.csv");
    std::ofstream snap(res.snapshot_csv);
    if (!snap) throw Error("cannot write " + res.snapshot_csv.string());
    snap << "# tfetd snapshot csv v1\nt,x,u_num\n" << std::setprecision(17);
    for (std::size_t k = 0; k < res.trajectory.states.size(); ++k) {
      for (int i = 0; i < mesh.dofs(); ++i) {
        snap << res.trajectory.times[k] << ',' << res.x(i) << ','
             << res.trajectory.states[k](i) << '\n';
      }
    }
  }
  return res;
}

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ValidateOptions {
  /// Flip the sign of the Riesz constant everywhere (negative control).
  bool tamper_c_alpha = false;
  unsigned seed = 12345;
};

struct ValidationSummary {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

/// Identity, oracle and exactness checks; each compares a deviation with a
/// threshold (value <= threshold passes).
inline ValidationSummary run_validate(const ValidateOptions& opt = {},
                                      std::ostream* log = nullptr) {
  ValidationSummary out;
  auto record = [&](std::string name, auto&& compute, double threshold) {
    CheckResult c;
    c.name = std::move(name);
    c.threshold = threshold;
    try {
      c.value = compute();
      c.pass = std::isfinite(c.value) && c.value <= threshold;
    } catch (const std::exception& e) {
      c.value = std::numeric_limits<double>::quiet_NaN();
      c.pass = false;
      c.name += std::string(" [") + e.what() + "]";
    }
    if (log) {
      *log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << std::setprecision(4) << c.value
           << " (<= " << threshold << ")\n";
    }
    out.checks.push_back(std::move(c));
  };
  auto params = [&](double a, double l) {
    TemperedParams p = TemperedParams::make(a, l);
    if (opt.tamper_c_alpha) p.c_alpha = -p.c_alpha;
    return p;
  };
  std::mt19937 rng(opt.seed);

  // Special functions.
  record("gamma(0.5) = sqrt(pi)",
         [] { return std::abs(specfun::gamma_fn(0.5) - std::sqrt(std::numbers::pi)); }, 1e-14);
  record("gamma recurrence on (-5, 5)", [&] {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      double x = u(rng);
      if (std::abs(x - std::nearbyint(x)) < 1e-3) x += 0.01;
      const double g1 = specfun::gamma_fn(x + 1.0);
      worst = std::max(worst, std::abs(g1 - x * specfun::gamma_fn(x)) / std::abs(g1));
    }
    return worst;
  }, 1e-12);
  record("lower incomplete gamma(-0.5, 1)", [] {
    const double expect = -2.0 * (std::sqrt(std::numbers::pi) * std::erf(1.0) + std::exp(-1.0));
    return std::abs(specfun::lower_incomplete_gamma(-0.5, 1.0) - expect) / std::abs(expect);
  }, 1e-11);

  // Pointwise operators against closed forms and the adaptive oracle.
  record("half derivative of x at 1", [] {
    const ScalarField f = ScalarField::polynomial(Polynomial({0.0, 1.0}));
    return std::abs(FieldOperators(f, 0.0).derivative(Side::Left, 0.5, 1.0) -
                    2.0 / std::sqrt(std::numbers::pi));
  }, 1e-12);
  record("hat derivative vs oracle", [] {
    const ScalarField hat = ScalarField::hat(0.5, 0.25);
    double worst = 0.0;
    for (Side s : {Side::Left, Side::Right}) {
      const double a = FieldOperators(hat, 1.0).derivative(s, 0.7, 0.6);
      const double b = oracle::tempered_derivative(hat, 0.7, 1.0, s, 0.6);
      worst = std::max(worst, std::abs(a - b));
    }
    return worst;
  }, 1e-9);
  for (double lambda : {1.0, 0.0}) {
    record("Riesz operator vs oracle, lambda=" + std::to_string(lambda).substr(0, 3), [&] {
      const TemperedParams p = params(1.6, lambda);
      const ScalarField f = ScalarField::polynomial(Polynomial::power_product(3, 3));
      double worst = 0.0;
      for (double x : {0.1, 0.3, 0.5, 0.8}) {
        worst = std::max(worst, std::abs(apply_riesz_tempered(f, p, x) -
                                         oracle::riesz_tempered(f, p, x)));
      }
      return worst;
    }, 1e-9);
  }
  record("classical limit of Riesz operator on x(1-x)", [&] {
    const TemperedParams p = params(1.999, 1e-8);
    const ScalarField f = ScalarField::polynomial(Polynomial::power_product(1, 1));
    return std::abs(apply_riesz_tempered(f, p, 0.5) + 2.0) / 2.0;
  }, 0.01);

  // Tempered-calculus identities.
  const struct {
    double a, l, w, tol;
  } fourier[] = {{1.6, 1.0, 0.04, 1e-6}, {1.2, 0.5, 0.04, 1e-6}, {1.6, 25.0, 0.02, 1e-5}};
  for (const auto& c : fourier) {
    std::ostringstream name;
    name << "Fourier symbol alpha=" << c.a << " lambda=" << c.l;
    record(name.str(), [&] { return check_fourier_symbol(TemperedParams::make(c.a, c.l), c.w); },
           c.tol);
  }
  {
    const IdentityDeviations d = check_semigroup_adjoint(0.6, 0.6, 1.0);
    record("semigroup a=b=0.6 lambda=1", [&] { return d.semigroup_dev; }, 1e-7);
    record("adjoint a=0.6 lambda=1", [&] { return d.adjoint_dev; }, 1e-7);
    record("D o I = id a=0.6 lambda=1", [&] { return d.inverse_dev; }, 1e-9);
    const IdentityDeviations c = check_semigroup_adjoint(0.3, 0.9, 0.0);
    record("semigroup a=0.3 b=0.9 lambda=0", [&] { return c.semigroup_dev; }, 1e-8);
    const IdentityDeviations e = check_semigroup_adjoint(1.0, 0.5, 1.0);
    record("D o I = id a=1 lambda=1", [&] { return e.inverse_dev; }, 1e-9);
  }

  // Assembly.
  record("stiffness N=4 vs oracle", [&] {
    const TemperedParams p = params(1.6, 1.0);
    const Eigen::MatrixXd G = assemble_stiffness(Mesh1D::make(4), p);
    double worst = 0.0;
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        worst = std::max(worst, std::abs(G(i - 1, j - 1) - oracle::stiffness_entry(4, p, i, j)));
      }
    }
    return worst;
  }, 1e-8);
  record("stiffness classical limit N=8 (relative to max entry)", [&] {
    const Mesh1D mesh = Mesh1D::make(8);
    const Eigen::MatrixXd G = assemble_stiffness(mesh, params(1.999, 1e-8));
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(7, 7);
    for (int i = 0; i < 7; ++i) {
      K(i, i) = 2.0 / mesh.h;
      if (i + 1 < 7) K(i, i + 1) = K(i + 1, i) = -1.0 / mesh.h;
    }
    double worst = 0.0;
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) {
        const double scale = K(i, j) != 0.0 ? std::abs(K(i, j)) : K.cwiseAbs().maxCoeff();
        worst = std::max(worst, std::abs(G(i, j) - K(i, j)) / scale);
      }
    }
    return worst;
  }, 0.01);
  record("B positive definite at N=32 (minus smallest eigenvalue)", [&] {
    const auto op = assemble_operator(Mesh1D::make(32), params(1.6, 1.0));
    return -eigenvalues_of_b(*op).minCoeff();
  }, 1e-10);

  // Manufactured residual u_t - L u - f at the exact solution, with L from
  // the adaptive oracle.
  for (ExampleId id : {ExampleId::Linear1, ExampleId::Nonlinear2}) {
    record("manufactured residual example " + std::to_string(static_cast<int>(id)), [&] {
      const TemperedParams p = params(1.6, 1.0);
      const BenchmarkProblem prob = make_example(id, p);
      std::uniform_real_distribution<double> ux(0.02, 0.98);
      std::uniform_real_distribution<double> ut(0.0, 1.0);
      const Polynomial X = prob.source->profile_polynomial();
      const ScalarField Xf = ScalarField::polynomial(X);
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        const double x = ux(rng);
        const double t = ut(rng);
        const double u = prob.exact(x, t);
        const double lu = std::exp(-t) * oracle::riesz_tempered(Xf, p, x);
        worst = std::max(worst, std::abs(-u - lu - prob.source_value(x, t, u)));
      }
      return worst;
    }, 1e-7);
  }
  record("example 2 operator profile vs closed-form series", [&] {
    const TemperedParams p = params(1.6, 1.0);
    const BenchmarkProblem prob = example2(p);
    double worst = 0.0;
    for (double x : {0.1, 0.35, 0.5, 0.9}) {
      worst = std::max(worst, std::abs(prob.source->operator_profile(x) -
                                       example2_operator_series(p, x)));
    }
    return worst;
  }, 1e-8);

  // Time stepping.
  // r(-1/10) = (23/24) / ((41/40)(31/30)) = 1150/1271 exactly.
  record("rdp_rational(-0.1) = 1150/1271", [] {
    return std::abs(rdp_rational(-0.1) - 1150.0 / 1271.0);
  }, 1e-9);
  record("CN scalar step (1 - tau/2)/(1 + tau/2)", [] {
    const auto sys = SemiDiscreteSystem::from_matrix(Eigen::MatrixXd::Ones(1, 1),
                                                     SourceMap::zero(), Eigen::VectorXd::Ones(1));
    const auto ops = FactoredOperators::for_cn(sys.B(), 0.1);
    const CnStepResult r = cn_step(sys, ops, 0.0, sys.initial, 0.1, StepperConfig{});
    return std::abs(r.state(0) - 0.95 / 1.05);
  }, 1e-15);
  record("partial fractions (I+tB/4)^-1 (I+tB/3)^-1", [&] {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd A(6, 6);
    for (int i = 0; i < 36; ++i) A(i) = u(rng);
    const Eigen::MatrixXd B = A * A.transpose() + Eigen::MatrixXd::Identity(6, 6);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
    const double t = 0.1;
    const Eigen::MatrixXd R3 = (I + t * B / 3.0).inverse();
    const Eigen::MatrixXd R4 = (I + t * B / 4.0).inverse();
    const double d1 = (R4 * R3 - (4.0 * R3 - 3.0 * R4)).cwiseAbs().maxCoeff();
    const double d2 = ((I + t * B / 6.0) * R4 * R3 - (2.0 * R3 - R4)).cwiseAbs().maxCoeff();
    return std::max(d1, d2);
  }, 1e-12);
  record("homogeneous ETD-RDP vs dense r(-tau B)^m, N=16", [&] {
    const auto op = assemble_operator(Mesh1D::make(16), params(1.6, 1.0));
    Eigen::VectorXd U0(15);
    for (int i = 0; i < 15; ++i) U0(i) = std::sin(3.0 * (i + 1) / 16.0) + 0.1 * (i % 3);
    const SemiDiscreteSystem sys{op, SourceMap::zero(), U0};
    StepperConfig c;
    c.tau = 1.0 / 32.0;
    const Trajectory tr = integrate(sys, c);
    const Eigen::VectorXd dense = rdp_power_dense(*op, c.tau, tr.steps, U0);
    return (tr.final_state() - dense).lpNorm<Eigen::Infinity>() / U0.lpNorm<Eigen::Infinity>();
  }, 1e-11);
  return out;
}

}  // namespace tfetd
