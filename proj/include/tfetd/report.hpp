#pragma once

// Error measures and convergence tables.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/steppers.hpp"

namespace tfetd {

/// ||u - u_num||_inf / ||u||_inf over the supplied (interior) nodes.
inline double rel_linf_error(const Eigen::VectorXd& u_exact, const Eigen::VectorXd& u_num) {
  if (u_exact.size() != u_num.size()) throw DomainError("rel_linf_error: length mismatch");
  const double scale = u_exact.lpNorm<Eigen::Infinity>();
  if (!(scale > 0.0)) throw DomainError("rel_linf_error: reference has zero max norm");
  return (u_exact - u_num).lpNorm<Eigen::Infinity>() / scale;
}

/// log2(e_coarse / e_fine) for a step-size halving.
inline double observed_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
    throw DomainError("observed_order: errors must be positive");
  }
  return std::log2(e_coarse / e_fine);
}

/// Throws ConfigError unless every entry is half the previous one.
inline void require_halvings(const std::vector<double>& taus) {
  for (std::size_t k = 1; k < taus.size(); ++k) {
    if (std::abs(taus[k] - 0.5 * taus[k - 1]) > 1e-12 * taus[k - 1]) {
      throw ConfigError("tau list must be successive halvings");
    }
  }
}

struct ConvergenceRow {
  double alpha = 0.0;
  double h = 0.0;
  double tau = 0.0;
  Scheme scheme = Scheme::EtdRdp;
  double error = std::numeric_limits<double>::quiet_NaN();
  double order = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0.0;
  long newton_iters = 0;
  bool ok = true;
  std::string message;
};

struct ConvergenceReport {
  int example = 1;
  std::vector<ConvergenceRow> rows;

  /// Fills `order` between consecutive (tau, tau/2) rows of the same
  /// (alpha, scheme); rows are expected grouped and ordered by decreasing tau.
  void compute_orders() {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      ConvergenceRow& r = rows[k];
      const ConvergenceRow& p = rows[k - 1];
      r.order = std::numeric_limits<double>::quiet_NaN();
      if (p.alpha != r.alpha || p.scheme != r.scheme) continue;
      if (std::abs(r.tau - 0.5 * p.tau) > 1e-12 * p.tau) {
        throw ConfigError("convergence rows are not successive tau halvings");
      }
      if (p.ok && r.ok && p.error > 0.0 && r.error > 0.0) r.order = observed_order(p.error, r.error);
    }
  }

  std::vector<ConvergenceRow> select(double alpha, Scheme scheme) const {
    std::vector<ConvergenceRow> out;
    for (const auto& r : rows) {
      if (r.alpha == alpha && r.scheme == scheme) out.push_back(r);
    }
    return out;
  }

  static constexpr const char* kCsvHeader = "# tfetd convergence csv v1";
  static constexpr const char* kCsvColumns =
      "alpha,h,tau,scheme,rel_linf_error,observed_order,wall_time_s,newton_iters_total,status";

  void write_csv(std::ostream& out, std::optional<double> only_alpha = std::nullopt) const {
    out << kCsvHeader << " example=" << example << '\n' << kCsvColumns << '\n';
    out << std::setprecision(10);
    for (const auto& r : rows) {
      if (only_alpha && r.alpha != *only_alpha) continue;
      out << r.alpha << ',' << r.h << ',' << r.tau << ',' << scheme_name(r.scheme) << ','
          << r.error << ',';
      if (!std::isnan(r.order)) out << r.order;
      out << ',' << r.wall_time << ',' << r.newton_iters << ','
          << (r.ok ? "ok" : "failed: " + r.message) << '\n';
    }
  }

  /// One file per alpha: convergence_<example>_<alpha>.csv. Returns the paths.
  std::vector<std::filesystem::path> write_csvs(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::map<double, bool> alphas;
    for (const auto& r : rows) alphas[r.alpha] = true;
    std::vector<std::filesystem::path> written;
    for (const auto& [a, unused] : alphas) {
      std::ostringstream name;
      name << "convergence_" << example << '_' << a << ".csv";
      const auto path = dir / name.str();
      std::ofstream out(path);
      if (!out) throw Error("cannot write " + path.string());
      write_csv(out, a);
      written.push_back(path);
    }
    return written;
  }
};

}  // namespace tfetd
