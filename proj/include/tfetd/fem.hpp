#pragma once

// Uniform P1 finite elements for the Riesz-tempered bilinear form
//
//   R(u, v) = -c_alpha <D_+^{mu,lambda} u, D_-^{mu,lambda} v>
//             -c_alpha <D_-^{mu,lambda} u, D_+^{mu,lambda} v>
//             + 2 c_alpha lambda^alpha <u, v>,      mu = alpha / 2,
//
// on [0, 1] with homogeneous Dirichlet conditions.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/field.hpp"
#include "tfetd/parallel.hpp"
#include "tfetd/params.hpp"
#include "tfetd/quadrature.hpp"
#include "tfetd/tfrac.hpp"

namespace tfetd {

struct Mesh1D {
  int n_elements = 2;
  double h = 0.5;

  static Mesh1D make(int n_elements) {
    if (n_elements < 2) throw DomainError("Mesh1D: need at least 2 elements");
    return Mesh1D{n_elements, 1.0 / n_elements};
  }

  double node(int i) const { return i * h; }
  /// Interior degrees of freedom, nodes 1..N-1.
  int dofs() const { return n_elements - 1; }

  Eigen::VectorXd interior_nodes() const {
    Eigen::VectorXd x(dofs());
    for (int i = 0; i < dofs(); ++i) x(i) = node(i + 1);
    return x;
  }

  /// Hat function attached to node i (1 <= i <= N-1).
  ScalarField basis(int i) const { return ScalarField::hat(node(i), h); }
};

/// Exact hat-function overlaps: 2h/3 on the diagonal, h/6 off it.
inline Eigen::MatrixXd assemble_mass(const Mesh1D& mesh) {
  const int n = mesh.dofs();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    P(i, i) = 2.0 * mesh.h / 3.0;
    if (i + 1 < n) {
      P(i, i + 1) = mesh.h / 6.0;
      P(i + 1, i) = mesh.h / 6.0;
    }
  }
  return P;
}

namespace detail {

/// Cross term I(k) = int D_+ phi_j (x) D_- phi_{j+k}(x) dx as a function of
/// the index offset k. On a uniform mesh every interior hat is a translate
/// of one template and the tempered derivatives commute with translation,
/// so both derivatives are tabulated once per element on the graded rule
/// and the integrals reduce to sums over element pairs.
class CrossTermTable {
 public:
  CrossTermTable(const Mesh1D& mesh, const TemperedParams& p, const QuadratureRule& rule,
                 int threads)
      : n_(mesh.n_elements), h_(mesh.h), rule_(graded_rule(rule.legendre_nodes,
                                                           rule.grading_ratio,
                                                           rule.grading_levels)) {
    const double centre = 0.5;
    const FieldOperators ops(ScalarField::hat(centre, h_), p.lambda, rule);
    const std::size_t q = rule_.size();
    // left_[m + 1] holds D_+ phi on [m h, (m+1) h] relative to the hat
    // centre, m = -1 .. N-1; right_[m + N - 1] holds D_- phi for
    // m = -(N-1) .. 0. Outside those ranges the derivatives vanish.
    left_.assign(static_cast<std::size_t>(n_ + 1) * q, 0.0);
    right_.assign(static_cast<std::size_t>(n_) * q, 0.0);
    parallel_for(0, n_ + 1, threads, [&](std::ptrdiff_t idx) {
      const int m = static_cast<int>(idx) - 1;
      for (std::size_t k = 0; k < q; ++k) {
        const double x = centre + (m + rule_.nodes[k]) * h_;
        left_[idx * q + k] = ops.derivative(Side::Left, p.mu, x);
      }
    });
    parallel_for(0, n_, threads, [&](std::ptrdiff_t idx) {
      const int m = static_cast<int>(idx) - (n_ - 1);
      for (std::size_t k = 0; k < q; ++k) {
        const double x = centre + (m + rule_.nodes[k]) * h_;
        right_[idx * q + k] = ops.derivative(Side::Right, p.mu, x);
      }
    });
  }

  /// I(k) for k >= -1; zero for k < -1 (disjoint supports).
  double operator()(int k) const {
    if (k < -1) return 0.0;
    const std::size_t q = rule_.size();
    double sum = 0.0;
    for (int m = -1; m <= k; ++m) {
      const double* a = &left_[static_cast<std::size_t>(m + 1) * q];
      const double* b = &right_[static_cast<std::size_t>(m - k + n_ - 1) * q];
      double part = 0.0;
      for (std::size_t t = 0; t < q; ++t) part += rule_.weights[t] * a[t] * b[t];
      sum += part;
    }
    return h_ * sum;
  }

 private:
  int n_;
  double h_;
  GaussRule rule_;
  std::vector<double> left_;
  std::vector<double> right_;
};

}  // namespace detail

/// Stiffness matrix g_ij = R(phi_j, phi_i) on the interior hats.
inline Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh, const TemperedParams& p,
                                          const QuadratureRule& rule = {}, int threads = 1) {
  rule.validate();
  const int n = mesh.dofs();
  const detail::CrossTermTable cross(mesh, p, rule, threads);
  std::vector<double> by_offset(n);
  for (int k = 0; k < n; ++k) by_offset[k] = cross(k) + cross(-k);
  const Eigen::MatrixXd P = assemble_mass(mesh);
  const double reaction = 2.0 * p.c_alpha * p.lambda_pow_alpha();
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      G(i, j) = -p.c_alpha * by_offset[std::abs(i - j)] + reaction * P(i, j);
    }
  }
  if (!G.allFinite()) throw AssemblyError("assemble_stiffness: non-finite entry");
  const double scale = G.cwiseAbs().maxCoeff();
  const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6 * scale) {
    throw AssemblyError("assemble_stiffness: asymmetry " + std::to_string(asym));
  }
  return G;
}

/// LDL^T factorisation of a symmetric positive definite tridiagonal matrix.
class TridiagonalSpd {
 public:
  explicit TridiagonalSpd(const Eigen::MatrixXd& A) : n_(static_cast<int>(A.rows())) {
    d_.resize(n_);
    l_.resize(std::max(n_ - 1, 0));
    for (int i = 0; i < n_; ++i) {
      double di = A(i, i);
      if (i > 0) di -= l_[i - 1] * l_[i - 1] * d_[i - 1];
      if (!(di > 0.0)) throw SolveError("TridiagonalSpd: matrix not positive definite");
      d_[i] = di;
      if (i + 1 < n_) l_[i] = A(i + 1, i) / di;
    }
  }

  void solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const {
    for (int i = 1; i < n_; ++i) x(i) -= l_[i - 1] * x(i - 1);
    for (int i = 0; i < n_; ++i) x(i) /= d_[i];
    for (int i = n_ - 2; i >= 0; --i) x(i) -= l_[i] * x(i + 1);
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const {
    Eigen::MatrixXd x = rhs;
    for (int c = 0; c < x.cols(); ++c) solve_in_place(x.col(c));
    return x;
  }

 private:
  int n_;
  std::vector<double> d_;
  std::vector<double> l_;
};

/// Assembled spatial operator U' + B U = F with B = P^{-1} G. Immutable
/// once built and shared between time steppers.
struct FemOperator {
  Mesh1D mesh;
  TemperedParams params;
  Eigen::MatrixXd P;
  Eigen::MatrixXd G;
  Eigen::MatrixXd B;
};

inline std::shared_ptr<const FemOperator> assemble_operator(const Mesh1D& mesh,
                                                            const TemperedParams& p,
                                                            const QuadratureRule& rule = {},
                                                            int threads = 1) {
  auto op = std::make_shared<FemOperator>();
  op->mesh = mesh;
  op->params = p;
  op->P = assemble_mass(mesh);
  op->G = assemble_stiffness(mesh, p, rule, threads);
  op->B = TridiagonalSpd(op->P).solve(op->G);
  return op;
}

/// Row-major CSV with 17 significant digits.
inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << M(i, j);
    }
    out << '\n';
  }
}

}  // namespace tfetd
