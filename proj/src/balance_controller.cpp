#include "quadloco/balance_controller.hpp"

namespace quadloco {

Vec6 pd_input(const StateError& error, const BalanceGains& gains) {
  return -gains.kp.cwiseProduct(error.e_p) - gains.kd.cwiseProduct(error.e_d);
}

namespace {

Vec6 gravity_feedforward(const RobotParams& params) {
  Vec6 g = Vec6::Zero();
  g.head<3>() = -params.gravity;  // (0, 0, +|g|) for default gravity
  return g;
}

Mat6 nominal_mass_matrix(const RobotParams& nominal, const RobotState& state) {
  const Mat3 Rz = yaw_rotation(state.yaw());
  Mat6 M = Mat6::Zero();
  M.topLeftCorner<3, 3>() = nominal.mass * Mat3::Identity();
  M.bottomRightCorner<3, 3>() = Rz * nominal.body_inertia * Rz.transpose();
  return M;
}

}  // namespace

Vec6 desired_dynamics(const Vec6& u, const RobotParams& nominal,
                      const RobotState& state) {
  return nominal_mass_matrix(nominal, state) * (u + gravity_feedforward(nominal));
}

Vec6 realized_input(const StanceForces& forces, const FootSet& feet,
                    const RobotState& state, const RobotParams& nominal) {
  Mat6x12 A = Mat6x12::Zero();
  for (int i = 0; i < 4; ++i) {
    A.block<3, 3>(0, 3 * i).setIdentity();
    A.block<3, 3>(3, 3 * i) = skew(feet.positions[i] - state.com_position);
  }
  const Mat6 M = nominal_mass_matrix(nominal, state);
  return M.inverse() * (A * forces) - gravity_feedforward(nominal);
}

void append_friction_rows(const RobotParams& params, int row0, int col0,
                          Eigen::MatrixXd& C, Eigen::VectorXd& lb,
                          Eigen::VectorXd& ub) {
  const double mu = params.friction_coeff;
  // Fx - mu Fz <= 0
  C(row0, col0) = 1;
  C(row0, col0 + 2) = -mu;
  lb[row0] = -qp::kInfinity;
  ub[row0] = 0;
  // Fx + mu Fz >= 0
  C(row0 + 1, col0) = 1;
  C(row0 + 1, col0 + 2) = mu;
  lb[row0 + 1] = 0;
  ub[row0 + 1] = qp::kInfinity;
  // Fy - mu Fz <= 0
  C(row0 + 2, col0 + 1) = 1;
  C(row0 + 2, col0 + 2) = -mu;
  lb[row0 + 2] = -qp::kInfinity;
  ub[row0 + 2] = 0;
  // Fy + mu Fz >= 0
  C(row0 + 3, col0 + 1) = 1;
  C(row0 + 3, col0 + 2) = mu;
  lb[row0 + 3] = 0;
  ub[row0 + 3] = qp::kInfinity;
  // fz_min <= Fz <= fz_max
  C(row0 + 4, col0 + 2) = 1;
  lb[row0 + 4] = params.fz_min;
  ub[row0 + 4] = params.fz_max;
}

StanceForces BalanceController::solve_grf(const Vec6& b_d, const FootSet& feet,
                                          const RobotState& state) {
  const int ns = feet.stance_count();
  StanceForces out = StanceForces::Zero();
  if (ns == 0) return out;

  const int n = 3 * ns;
  Eigen::MatrixXd A_s(6, n);
  Eigen::VectorXd f_prev(n);
  int c = 0;
  for (int i = 0; i < 4; ++i) {
    if (!feet.contact[i]) continue;
    A_s.block<3, 3>(0, 3 * c).setIdentity();
    A_s.block<3, 3>(3, 3 * c) = skew(feet.positions[i] - state.com_position);
    f_prev.segment<3>(3 * c) = prev_forces_.segment<3>(3 * i);
    ++c;
  }

  qp::QpProblem qp;
  const double g12 = gains_.gamma1 + gains_.gamma2;
  qp.hessian = 2.0 * (A_s.transpose() * gains_.S * A_s +
                      g12 * Eigen::MatrixXd::Identity(n, n));
  qp.linear_cost =
      -2.0 * (A_s.transpose() * (gains_.S * b_d) + gains_.gamma2 * f_prev);

  const int m = 5 * ns;
  qp.constraint_matrix = Eigen::MatrixXd::Zero(m, n);
  qp.lower_bounds = Eigen::VectorXd::Zero(m);
  qp.upper_bounds = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < ns; ++j)
    append_friction_rows(nominal_, 5 * j, 3 * j, qp.constraint_matrix,
                         qp.lower_bounds, qp.upper_bounds);

  last_solution_ = solver_.solve(qp);

  c = 0;
  for (int i = 0; i < 4; ++i) {
    if (!feet.contact[i]) continue;
    out.segment<3>(3 * i) = last_solution_.primal.segment<3>(3 * c);
    ++c;
  }
  prev_forces_ = out;
  return out;
}

}  // namespace quadloco
