#pragma once

// Time steppers for U' + B U = F(t, U).
//
// ETD-RDP (one step, tau):
//   U*     = (I + tau B)^{-1} (U + tau F(t, U))
//   U_next = (I + tau B/3)^{-1} (9U + 2 tau F(t, U) + tau F(t + tau, U*))
//          + (I + tau B/4)^{-1} (-8U - 3/2 tau F(t, U) - 1/2 tau F(t + tau, U*))
//
// Crank-Nicolson:
//   (I + tau B/2) V = (I - tau B/2) U + tau/2 [F(t, U) + F(t + tau, V)],
// solved by Newton on the residual with the diagonal Jacobian of F.

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfetd/errors.hpp"
#include "tfetd/system.hpp"

namespace tfetd {

enum class Scheme { EtdRdp, Cn };

inline const char* scheme_name(Scheme s) { return s == Scheme::EtdRdp ? "etdrdp" : "cn"; }

struct StepperConfig {
  double tau = 0.1;
  Scheme scheme = Scheme::EtdRdp;
  double newton_tol = 1e-6;
  int newton_max_iter = 50;
  double t_end = 1.0;
  /// Keep every k-th state in the trajectory (0: initial and final only).
  int snapshot_every = 0;

  /// Number of steps M with M tau = t_end.
  int steps() const {
    validate();
    if (t_end == 0.0) return 0;
    return static_cast<int>(std::llround(t_end / tau));
  }

  void validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be >= 0");
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
    if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    const double m = t_end / tau;
    if (std::abs(m - std::nearbyint(m)) > 1e-9 * std::max(1.0, m)) {
      throw ConfigError("t_end / tau must be a whole number of steps");
    }
  }
};

namespace detail {

inline Eigen::PartialPivLU<Eigen::MatrixXd> factor_shifted(const Eigen::MatrixXd& B, double s) {
  Eigen::MatrixXd A = s * B;
  A.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-14) || !std::isfinite(rc)) {
    throw SolveError("singular resolvent I + " + std::to_string(s) + " B (rcond " +
                     std::to_string(rc) + ")");
  }
  return lu;
}

}  // namespace detail

/// Resolvent factorizations for one (B, tau) pair, built once and reused
/// every step.
class FactoredOperators {
 public:
  static FactoredOperators for_etd_rdp(const Eigen::MatrixXd& B, double tau) {
    FactoredOperators f;
    f.scheme_ = Scheme::EtdRdp;
    f.tau_ = tau;
    f.full_ = detail::factor_shifted(B, tau);
    f.third_ = detail::factor_shifted(B, tau / 3.0);
    f.quarter_ = detail::factor_shifted(B, tau / 4.0);
    return f;
  }

  static FactoredOperators for_cn(const Eigen::MatrixXd& B, double tau) {
    FactoredOperators f;
    f.scheme_ = Scheme::Cn;
    f.tau_ = tau;
    f.half_ = detail::factor_shifted(B, tau / 2.0);
    f.explicit_half_ = -0.5 * tau * B;
    f.explicit_half_->diagonal().array() += 1.0;
    return f;
  }

  Scheme scheme() const { return scheme_; }
  double tau() const { return tau_; }

  const Eigen::PartialPivLU<Eigen::MatrixXd>& full() const { return require(full_); }
  const Eigen::PartialPivLU<Eigen::MatrixXd>& third() const { return require(third_); }
  const Eigen::PartialPivLU<Eigen::MatrixXd>& quarter() const { return require(quarter_); }
  const Eigen::PartialPivLU<Eigen::MatrixXd>& half() const { return require(half_); }
  /// I - tau B / 2
  const Eigen::MatrixXd& explicit_half() const { return require(explicit_half_); }

 private:
  template <typename T>
  static const T& require(const std::optional<T>& v) {
    if (!v) throw PreconditionError("FactoredOperators: built for the other scheme");
    return *v;
  }

  Scheme scheme_ = Scheme::EtdRdp;
  double tau_ = 0.0;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> full_, third_, quarter_, half_;
  std::optional<Eigen::MatrixXd> explicit_half_;
};

namespace detail {

inline void require_tau(const FactoredOperators& ops, double tau) {
  if (tau != ops.tau()) {
    throw PreconditionError("step size differs from the factored tau");
  }
}

}  // namespace detail

/// First-order predictor (I + tau B)^{-1} (U + tau F(t, U)).
inline Eigen::VectorXd etd1_step(const SemiDiscreteSystem& sys, const FactoredOperators& ops,
                                 double t, const Eigen::VectorXd& U, double tau) {
  detail::require_tau(ops, tau);
  Eigen::VectorXd F;
  sys.source.eval(t, U, F);
  return ops.full().solve(U + tau * F);
}

inline Eigen::VectorXd etd_rdp_step(const SemiDiscreteSystem& sys, const FactoredOperators& ops,
                                    double t, const Eigen::VectorXd& U, double tau) {
  detail::require_tau(ops, tau);
  Eigen::VectorXd Fn;
  Eigen::VectorXd Fs;
  sys.source.eval(t, U, Fn);
  const Eigen::VectorXd Us = ops.full().solve(U + tau * Fn);
  sys.source.eval(t + tau, Us, Fs);
  const Eigen::VectorXd a = 9.0 * U + 2.0 * tau * Fn + tau * Fs;
  const Eigen::VectorXd b = -8.0 * U - 1.5 * tau * Fn - 0.5 * tau * Fs;
  Eigen::VectorXd out = ops.third().solve(a);
  out += ops.quarter().solve(b);
  if (!out.allFinite()) throw SolveError("etd_rdp_step: non-finite state");
  return out;
}

struct CnStepResult {
  Eigen::VectorXd state;
  int newton_iters = 0;
};

inline CnStepResult cn_step(const SemiDiscreteSystem& sys, const FactoredOperators& ops,
                            double t, const Eigen::VectorXd& U, double tau,
                            const StepperConfig& cfg) {
  detail::require_tau(ops, tau);
  const Eigen::MatrixXd& B = sys.B();
  Eigen::VectorXd F;
  sys.source.eval(t, U, F);
  const Eigen::VectorXd fixed = ops.explicit_half() * U + 0.5 * tau * F;

  // R(V) = (I + tau B/2) V - fixed - tau/2 F(t + tau, V)
  Eigen::VectorXd V = U;
  Eigen::VectorXd FV;
  Eigen::VectorXd dF;
  auto residual = [&](const Eigen::VectorXd& v) {
    sys.source.eval(t + tau, v, FV);
    Eigen::VectorXd r = v + 0.5 * tau * (B * v) - fixed - 0.5 * tau * FV;
    return r;
  };
  Eigen::VectorXd R = residual(V);
  const bool nonlinear = sys.source.state_dependent();
  double norm = R.lpNorm<Eigen::Infinity>();
  for (int it = 1; it <= cfg.newton_max_iter; ++it) {
    Eigen::VectorXd delta;
    if (nonlinear) {
      sys.source.jacobian(t + tau, V, dF);
      Eigen::MatrixXd J = 0.5 * tau * B;
      J.diagonal().array() += 1.0 - 0.5 * tau * dF.array();
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      delta = lu.solve(-R);
    } else {
      delta = ops.half().solve(-R);
    }
    V += delta;
    R = residual(V);
    norm = R.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(norm)) {
      throw NewtonDivergence("cn_step: non-finite Newton residual", it, norm);
    }
    if (norm <= cfg.newton_tol) return CnStepResult{std::move(V), it};
  }
  throw NewtonDivergence("cn_step: Newton did not reach tolerance in " +
                             std::to_string(cfg.newton_max_iter) + " iterations (residual " +
                             std::to_string(norm) + ")",
                         cfg.newton_max_iter, norm);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  /// Factorization plus stepping, seconds.
  double wall_time = 0.0;
  long newton_iters = 0;
  int steps = 0;

  const Eigen::VectorXd& final_state() const { return states.back(); }
};

/// Steps from U(0) = sys.initial to t_end with fixed tau. Both schemes see
/// the same system; the factorizations are built once.
inline Trajectory integrate(const SemiDiscreteSystem& sys, const StepperConfig& cfg) {
  const int M = cfg.steps();
  const double tau = M > 0 ? cfg.t_end / M : cfg.tau;
  Trajectory traj;
  traj.steps = M;
  traj.times.push_back(0.0);
  traj.states.push_back(sys.initial);
  if (M == 0) return traj;

  const auto start = std::chrono::steady_clock::now();
  const FactoredOperators ops = cfg.scheme == Scheme::EtdRdp
                                    ? FactoredOperators::for_etd_rdp(sys.B(), tau)
                                    : FactoredOperators::for_cn(sys.B(), tau);
  Eigen::VectorXd U = sys.initial;
  for (int m = 0; m < M; ++m) {
    const double t = m * tau;
    if (cfg.scheme == Scheme::EtdRdp) {
      U = etd_rdp_step(sys, ops, t, U, tau);
    } else {
      CnStepResult r = cn_step(sys, ops, t, U, tau, cfg);
      U = std::move(r.state);
      traj.newton_iters += r.newton_iters;
    }
    const bool last = m + 1 == M;
    if (last || (cfg.snapshot_every > 0 && (m + 1) % cfg.snapshot_every == 0)) {
      traj.times.push_back(last ? cfg.t_end : (m + 1) * tau);
      traj.states.push_back(U);
    }
  }
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

}  // namespace tfetd
