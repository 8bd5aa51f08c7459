#pragma once

#include <stdexcept>
#include <vector>

#include "quadloco/types.hpp"

namespace quadloco {

struct NonHurwitz : std::runtime_error {
  NonHurwitz() : std::runtime_error("closed-loop matrix is not Hurwitz") {}
};

struct LyapunovCertificate {
  Mat12 A_m = Mat12::Zero();
  Mat12 Q_L = Mat12::Identity();
  Mat12 P = Mat12::Zero();
  double lambda = 0.0;  // lambda_min(Q_L) / lambda_max(P)
  double residual = 0.0;
};

/// Solves A_m' P + P A_m = -Q_L for the PD closed loop
/// A_m = [0 I; -Kp -Kd]. Throws NonHurwitz when any eigenvalue of A_m
/// has nonnegative real part.
LyapunovCertificate build_certificate(const Vec6& kp, const Vec6& kd,
                                      const Mat12& Q_L = Mat12::Identity());

/// Solves A' P + P A = -Q for general square A (Kronecker linear solve).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& Q);

struct DecayReport {
  double violation_fraction = 0.0;
  int violations = 0;
  int checked = 0;
  double eps_v = 0.0;
  double max_excess = 0.0;  // max of (Vdot + lambda V - eps_v)
};

/// Checks Vdot + lambda V <= eps_v along a logged error trace.
/// Vdot uses central finite differences with a 5-tick smoothing window.
/// When eps_v_override < 0, eps_v = 2 |P| delta_e delta_Delta from the
/// trace maxima (u_mismatch = |u* - u| per tick; may be empty => 0).
DecayReport check_decay(const std::vector<Vec12>& error_trace,
                        const std::vector<double>& u_mismatch,
                        const LyapunovCertificate& cert, double dt,
                        double eps_v_override = -1.0, int skip_ticks = 0);

struct BoundsReport {
  double e_tilde_max = 0.0;
  double e_tilde_ceiling = 0.0;
  double alpha_ceiling = 0.0;
  double beta_ceiling = 0.0;
  double delta_v_tilde = 0.0;
  bool within_bounds = false;
};

struct BoundConstants {
  double alpha_tilde_b = 40.0;  // 2 * max alpha projection bound
  double beta_tilde_b = 120.0;  // 2 * max beta projection bound
  double alpha_dot_b = 0.0;     // slowly varying by assumption
  double beta_dot_b = 0.0;
};

/// Evaluates the reference-vs-real error ceilings from the appendix
/// bound formulas and checks the logged e_tilde against them.
BoundsReport check_bounds(const std::vector<Vec12>& e_tilde_trace,
                          const Vec6& gamma, const LyapunovCertificate& cert,
                          const BoundConstants& constants);

}  // namespace quadloco
