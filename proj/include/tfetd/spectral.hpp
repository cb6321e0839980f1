#pragma once

// Dense spectral views of B = P^{-1} G through the symmetric-definite pencil
// G v = mu P v. Used as an independent reference for the time steppers and
// for the dissipativity check; never on the stepping path.

#include <complex>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/fem.hpp"
#include "tfetd/rdp.hpp"

namespace tfetd {

/// Eigenvalues of B (real, since B is similar to a symmetric matrix).
inline Eigen::VectorXd eigenvalues_of_b(const FemOperator& op) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.G, op.P,
                                                               Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolveError("eigenvalues_of_b: eigensolver failed");
  return es.eigenvalues();
}

/// r(-tau B)^m U0 evaluated in the eigenbasis: with G V = P V diag(mu) and
/// V^T P V = I, r(-tau B)^m = V diag(r(-tau mu)^m) V^T P.
inline Eigen::VectorXd rdp_power_dense(const FemOperator& op, double tau, int m,
                                       const Eigen::VectorXd& U0) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.G, op.P);
  if (es.info() != Eigen::Success) throw SolveError("rdp_power_dense: eigensolver failed");
  const Eigen::MatrixXd& V = es.eigenvectors();
  Eigen::VectorXd coeffs = V.transpose() * (op.P * U0);
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::pow(rdp_rational(-tau * es.eigenvalues()(k)), m);
  }
  return V * coeffs;
}

}  // namespace tfetd
