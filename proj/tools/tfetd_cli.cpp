// Command-line driver: solve, converge, bench, validate.
// Exit codes: 0 ok, 1 validation failure, 2 bad configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfetd/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kConfigError = 2;

struct Flags {
  int example = 1;
  std::vector<double> alphas = {1.6};
  double lambda = 1.0;
  std::string scheme = "both";
  int levels = 4;
  std::vector<int> n;
  std::vector<double> tau;
  double t_end = 1.0;
  std::string out = ".";
  int threads = 1;
  std::string cache;
  std::string load = "projected";
  int snapshot_every = 0;
  int repetitions = 3;
  double reference_tau = 1.0 / 1024.0;
  bool tamper = false;
};

std::vector<tfetd::Scheme> parse_schemes(const std::string& s) {
  if (s == "etdrdp") return {tfetd::Scheme::EtdRdp};
  if (s == "cn") return {tfetd::Scheme::Cn};
  if (s == "both") return {tfetd::Scheme::EtdRdp, tfetd::Scheme::Cn};
  throw tfetd::ConfigError("unknown scheme " + s);
}

// Grid from the flags: explicit --n/--tau win, otherwise the default grid
// with --levels.
tfetd::RunConfig to_config(const Flags& f, bool grid) {
  using namespace tfetd;
  const ExampleId id = parse_example_id(f.example);
  RunConfig c = grid ? RunConfig::default_grid(id, f.levels) : RunConfig{};
  c.example = id;
  c.alphas = f.alphas;
  c.lambda = f.lambda;
  c.schemes = parse_schemes(f.scheme);
  c.t_end = f.t_end;
  c.out_dir = f.out;
  c.threads = f.threads;
  c.cache_dir = f.cache;
  c.snapshot_every = f.snapshot_every;
  c.repetitions = f.repetitions;
  c.reference_tau = f.reference_tau;
  if (f.load == "projected") {
    c.load = SourceLoad::Projected;
  } else if (f.load == "nodal") {
    c.load = SourceLoad::Nodal;
  } else {
    throw ConfigError("unknown source load " + f.load);
  }
  if (!f.tau.empty()) c.tau_list = f.tau;
  if (!f.n.empty()) {
    c.n_list = f.n;
    // One mesh size means a fixed-mesh temporal study.
    c.couple_h_tau = c.n_list.size() > 1;
  } else if (!f.tau.empty() && c.couple_h_tau) {
    c.n_list.clear();
    for (double t : c.tau_list) c.n_list.push_back(static_cast<int>(std::lround(1.0 / t)));
  }
  if (!grid && c.n_list.empty()) c.n_list = {32};
  if (!grid && c.tau_list.empty()) c.tau_list = {1.0 / 32.0};
  return c;
}

void print_convergence(const tfetd::ConvergenceReport& r) {
  std::cout << std::setw(6) << "alpha" << std::setw(10) << "h" << std::setw(10) << "tau"
            << std::setw(8) << "scheme" << std::setw(14) << "error" << std::setw(9) << "order"
            << std::setw(11) << "time_s" << "\n";
  for (const auto& row : r.rows) {
    std::cout << std::setw(6) << row.alpha << std::setw(10) << row.h << std::setw(10) << row.tau
              << std::setw(8) << tfetd::scheme_name(row.scheme);
    if (row.ok) {
      std::cout << std::setw(14) << std::setprecision(5) << std::scientific << row.error
                << std::defaultfloat << std::setw(9) << std::setprecision(4) << row.order
                << std::setw(11) << row.wall_time << "\n";
    } else {
      std::cout << "  failed: " << row.message << "\n";
    }
    std::cout << std::setprecision(6);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tempered fractional reaction-diffusion: ETD-RDP and CN finite elements"};
  app.set_config("--config", "", "key = value file mirroring the flags (flags win)");
  app.require_subcommand(1);

  Flags f;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--example", f.example, "1 linear, 2 nonlinear, 3 box data")
        ->check(CLI::Range(1, 3));
    sub->add_option("--alpha", f.alphas, "fractional orders in (1, 2)")->delimiter(',');
    sub->add_option("--lambda", f.lambda, "tempering rate");
    sub->add_option("--scheme", f.scheme, "etdrdp, cn or both")
        ->check(CLI::IsMember({"etdrdp", "cn", "both"}));
    sub->add_option("--levels", f.levels, "number of tau halvings from 1/4");
    sub->add_option("--n", f.n, "mesh sizes (powers of 2, 4..512)")->delimiter(',');
    sub->add_option("--tau", f.tau, "time steps")->delimiter(',');
    sub->add_option("--t-end", f.t_end, "final time");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--threads", f.threads, "assembly threads");
    sub->add_option("--cache", f.cache, "directory for cached source tables");
    sub->add_option("--source-load", f.load, "projected or nodal")
        ->check(CLI::IsMember({"projected", "nodal"}));
    sub->add_option("--reference-tau", f.reference_tau, "reference step for example 3");
  };

  auto* solve = app.add_subcommand("solve", "single run, writes solution_<tag>.csv");
  common(solve);
  solve->add_option("--snapshot-every", f.snapshot_every, "also write every k-th state");
  auto* converge = app.add_subcommand("converge", "convergence table, convergence_<ex>_<alpha>.csv");
  common(converge);
  auto* bench = app.add_subcommand("bench", "ETD-RDP vs CN wall time, bench.csv");
  common(bench);
  bench->add_option("--repetitions", f.repetitions, "timing repetitions (median taken)");
  auto* validate = app.add_subcommand("validate", "identity, oracle and exactness checks");
  validate->add_flag("--tamper-c-alpha", f.tamper, "flip the Riesz constant (should fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*validate) {
      tfetd::ValidateOptions opt;
      opt.tamper_c_alpha = f.tamper;
      const auto summary = tfetd::run_validate(opt, &std::cout);
      std::size_t failed = 0;
      for (const auto& c : summary.checks) failed += !c.pass;
      std::cout << summary.checks.size() - failed << "/" << summary.checks.size()
                << " checks passed\n";
      return summary.all_pass() ? kOk : kValidationFailure;
    }
    if (*solve) {
      tfetd::RunConfig c = to_config(f, false);
      if (c.schemes.size() != 1) c.schemes = {tfetd::Scheme::EtdRdp};
      const auto res = tfetd::run_solve(c);
      std::cout << "wrote " << res.csv.string() << "\n";
      if (!res.snapshot_csv.empty()) std::cout << "wrote " << res.snapshot_csv.string() << "\n";
      if (res.exact.size()) {
        std::cout << "relative max error "
                  << tfetd::rel_linf_error(res.exact, res.trajectory.final_state()) << "\n";
      }
      return kOk;
    }
    if (*converge) {
      const tfetd::RunConfig c = to_config(f, true);
      const auto report = tfetd::run_convergence(c);
      print_convergence(report);
      for (const auto& p : report.write_csvs(c.out_dir)) std::cout << "wrote " << p.string() << "\n";
      return kOk;
    }
    if (*bench) {
      Flags g = f;
      if (g.n.empty()) g.n = {512};
      if (g.tau.empty()) g.tau = {1.0 / 32.0};
      if (!bench->count("--example")) g.example = 2;
      const tfetd::RunConfig c = to_config(g, false);
      const auto report = tfetd::run_bench(c);
      std::filesystem::create_directories(c.out_dir);
      const auto path = c.out_dir / "bench.csv";
      std::ofstream out(path);
      if (!out) throw tfetd::Error("cannot write " + path.string());
      report.write_csv(out);
      report.write_csv(std::cout);
      std::cout << "wrote " << path.string() << "\n";
      return kOk;
    }
  } catch (const tfetd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const tfetd::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kOk;
}
