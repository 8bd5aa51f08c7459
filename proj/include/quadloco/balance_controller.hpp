#pragma once

#include "quadloco/qp.hpp"
#include "quadloco/srb_model.hpp"

namespace quadloco {

struct BalanceGains {
  Vec6 kp = (Vec6() << 50, 50, 80, 120, 120, 80).finished();
  Vec6 kd = (Vec6() << 10, 10, 20, 20, 20, 20).finished();
  Mat6 S = Mat6::Identity();
  double gamma1 = 1e-4;
  double gamma2 = 1e-3;
};

/// u = -Kp e_p - Kd e_d (desired body accelerations).
Vec6 pd_input(const StateError& error, const BalanceGains& gains);

/// b_d = M_bar (u + G) with nominal mass/inertia and the gravity
/// feedforward on the linear rows.
Vec6 desired_dynamics(const Vec6& u, const RobotParams& nominal,
                      const RobotState& state);

/// u* realized by a force distribution: M_bar^-1 (A F) - G.
Vec6 realized_input(const StanceForces& forces, const FootSet& feet,
                    const RobotState& state, const RobotParams& nominal);

/// QP force distribution (Focchi-style balance controller). Holds the
/// previous solution for the rate penalty and the solver warm start.
class BalanceController {
 public:
  BalanceController(RobotParams nominal, BalanceGains gains)
      : nominal_(nominal), gains_(gains) {}

  /// Minimizes (A F - b_d)' S (A F - b_d) + g1 |F|^2 + g2 |F - F_prev|^2
  /// over stance-feet forces inside the friction pyramid. Swing-foot
  /// variables are eliminated, not penalized.
  StanceForces solve_grf(const Vec6& b_d, const FootSet& feet,
                         const RobotState& state);

  void reset() { prev_forces_.setZero(); }
  const qp::QpSolution& last_solution() const { return last_solution_; }
  const RobotParams& nominal() const { return nominal_; }
  const BalanceGains& gains() const { return gains_; }

 private:
  RobotParams nominal_;
  BalanceGains gains_;
  StanceForces prev_forces_ = StanceForces::Zero();
  qp::QpSolver solver_;
  qp::QpSolution last_solution_;
};

/// Friction-pyramid rows for one foot: |Fx| <= mu Fz, |Fy| <= mu Fz,
/// fz_min <= Fz <= fz_max. Five rows, three columns.
void append_friction_rows(const RobotParams& params, int row0, int col0,
                          Eigen::MatrixXd& C, Eigen::VectorXd& lb,
                          Eigen::VectorXd& ub);

}  // namespace quadloco
