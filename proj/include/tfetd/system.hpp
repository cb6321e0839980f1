#pragma once

// Semi-discrete system U' + B U = F(t, U) on the interior nodes.

#include <filesystem>
#include <functional>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/fem.hpp"
#include "tfetd/problems.hpp"

namespace tfetd {

/// Nodal source map. `jacobian` fills the diagonal of dF/dU and is empty
/// when F does not depend on U.
struct SourceMap {
  std::function<void(double t, const Eigen::VectorXd& U, Eigen::VectorXd& F)> eval;
  std::function<void(double t, const Eigen::VectorXd& U, Eigen::VectorXd& dF)> jacobian;

  bool state_dependent() const { return static_cast<bool>(jacobian); }

  static SourceMap zero() {
    return SourceMap{[](double, const Eigen::VectorXd& U, Eigen::VectorXd& F) {
                       F.setZero(U.size());
                     },
                     {}};
  }
};

struct SemiDiscreteSystem {
  std::shared_ptr<const FemOperator> op;
  SourceMap source;
  Eigen::VectorXd initial;

  const Eigen::MatrixXd& B() const { return op->B; }
  Eigen::Index size() const { return op->B.rows(); }

  /// A system with a given B and no mesh behind it, for scalar and
  /// matrix-level checks.
  static SemiDiscreteSystem from_matrix(Eigen::MatrixXd B, SourceMap source,
                                        Eigen::VectorXd initial) {
    if (B.rows() != B.cols() || B.rows() != initial.size()) {
      throw DomainError("SemiDiscreteSystem: B must be square and match the initial vector");
    }
    auto op = std::make_shared<FemOperator>();
    op->B = std::move(B);
    return SemiDiscreteSystem{std::move(op), std::move(source), std::move(initial)};
  }
};

/// How the operator part of a manufactured source enters the load.
///   Projected: P^{-1} <L X, phi_j>, the exact Galerkin load of that term.
///   Nodal:     (L X)(x_i), collocated at the interior nodes only.
/// All other source terms are collocated at the nodes in both modes.
enum class SourceLoad { Projected, Nodal };

struct SystemOptions {
  int threads = 1;
  std::filesystem::path cache_dir;
  SourceLoad load = SourceLoad::Projected;
};

/// F_i(t, U) = N(U_i) + e^{-t} (-X(x_i) - LX_i) - N(X(x_i) e^{-t}), where LX
/// is either the nodal value or the mass-matrix solve of the projected load.
/// Collocating L X alone treats it as vanishing at x = 0 and x = 1, which it
/// does not, and costs accuracy on the boundary elements.
inline SemiDiscreteSystem build_system(std::shared_ptr<const FemOperator> op,
                                       const BenchmarkProblem& problem,
                                       const SystemOptions& opt = {}) {
  const Mesh1D mesh = op->mesh;
  const int n = mesh.dofs();
  const Eigen::VectorXd x = mesh.interior_nodes();
  Eigen::VectorXd U0(n);
  for (int i = 0; i < n; ++i) U0(i) = problem.initial(x(i));

  SourceMap map = SourceMap::zero();
  if (problem.source) {
    auto src = problem.source;
    Eigen::VectorXd lx;
    if (opt.load == SourceLoad::Projected) {
      lx = src->operator_load(mesh, opt.threads, opt.cache_dir);
      TridiagonalSpd(op->P).solve_in_place(lx);
    } else {
      lx = src->nodal_operator_profile(mesh, opt.threads, opt.cache_dir).segment(1, n);
    }
    Eigen::VectorXd X(n);
    for (int i = 0; i < n; ++i) X(i) = src->profile(x(i));

    const Eigen::VectorXd base = -X - lx;
    if (src->reaction()) {
      const Reaction r = *src->reaction();
      map.eval = [base, X, r](double t, const Eigen::VectorXd& U, Eigen::VectorXd& F) {
        const double decay = std::exp(-t);
        F.resize(U.size());
        for (Eigen::Index i = 0; i < U.size(); ++i) {
          F(i) = decay * base(i) + r.value(U(i)) - r.value(X(i) * decay);
        }
      };
      map.jacobian = [r](double, const Eigen::VectorXd& U, Eigen::VectorXd& dF) {
        dF.resize(U.size());
        for (Eigen::Index i = 0; i < U.size(); ++i) dF(i) = r.derivative(U(i));
      };
    } else {
      map.eval = [base](double t, const Eigen::VectorXd&, Eigen::VectorXd& F) {
        F = std::exp(-t) * base;
      };
    }
  }
  return SemiDiscreteSystem{std::move(op), std::move(map), std::move(U0)};
}

inline SemiDiscreteSystem build_system(const Mesh1D& mesh, const BenchmarkProblem& problem,
                                       const QuadratureRule& rule = {},
                                       const SystemOptions& opt = {}) {
  return build_system(assemble_operator(mesh, problem.params, rule, opt.threads), problem, opt);
}

}  // namespace tfetd
