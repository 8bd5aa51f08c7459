#include "quadloco/mpc_controller.hpp"

#include "quadloco/balance_controller.hpp"

namespace quadloco {

ExtendedState embed_u_a(const RobotState& state, const Vec6& u_a,
                        double g_norm) {
  ExtendedState es;
  es.eta.head<12>() = state.as_vector();
  es.eta[12] = g_norm;
  es.eta.tail<6>() = u_a;
  return es;
}

AdaptiveModel extended_adaptive_matrices(const RobotState& state,
                                         const FootSet& feet,
                                         const RobotParams& params) {
  const ExtendedModel em = extended_matrices(state, feet, params);
  AdaptiveModel am;
  am.De.topLeftCorner<13, 13>() = em.Dc;
  am.De.block<6, 6>(6, 13).setIdentity();
  am.He.topRows<13>() = em.Hc;
  return am;
}

MpcPrediction MpcController::build_prediction(
    const RobotState& state, const ContactSchedule& schedule,
    const FootSet& feet, const std::vector<Vec12>& desired, const Vec6& u_a) {
  const int k = config_.horizon;
  const double g_norm = nominal_.gravity.norm();

  const ExtendedModel em = extended_matrices(state, feet, nominal_);
  auto [Ad, Bd] = discretize_zoh(em.Dc, em.Hc, config_.dt_mpc);

  // u_a feeds the acceleration rows with unit gain, constant over the
  // horizon; discretized separately so the baseline data is untouched.
  Eigen::MatrixXd B_ua = Eigen::MatrixXd::Zero(13, 6);
  B_ua.block<6, 6>(6, 0).setIdentity();
  Eigen::MatrixXd W = discretize_zoh(em.Dc, B_ua, config_.dt_mpc).second;

  MpcPrediction out;
  out.stance.assign(schedule.flags.begin(), schedule.flags.end());
  out.x0c.head<12>() = state.as_vector();
  out.x0c[12] = g_norm;
  out.u_a = u_a;

  std::vector<int> var_offset(k);
  int n = 0;
  for (int i = 0; i < k; ++i) {
    var_offset[i] = n;
    for (bool s : schedule.flags[i]) n += s ? 3 : 0;
  }
  out.num_force_vars = n;

  // prediction matrices over the 12 physical states
  out.pred_x0.resize(12 * k, 13);
  out.pred_u = Eigen::MatrixXd::Zero(12 * k, n);
  out.pred_w.resize(12 * k, 6);

  Eigen::MatrixXd Ad_pow = Ad;              // Ad^{i+1}
  Eigen::MatrixXd W_sum = W;                // sum_{l=0..i} Ad^l W
  std::vector<Eigen::MatrixXd> Bd_step(k);  // Bd with swing columns removed
  for (int i = 0; i < k; ++i) {
    Eigen::MatrixXd Bi(13, 3 * 0);
    int cols = 0;
    for (int leg = 0; leg < 4; ++leg)
      if (schedule.flags[i][leg]) cols += 3;
    Bi.resize(13, cols);
    int c = 0;
    for (int leg = 0; leg < 4; ++leg) {
      if (!schedule.flags[i][leg]) continue;
      Bi.middleCols(c, 3) = Bd.middleCols(3 * leg, 3);
      c += 3;
    }
    Bd_step[i] = std::move(Bi);
  }

  // row block i corresponds to x_{i+1}
  std::vector<Eigen::MatrixXd> Ad_powers(k + 1);
  Ad_powers[0] = Eigen::MatrixXd::Identity(13, 13);
  for (int i = 1; i <= k; ++i) Ad_powers[i] = Ad_powers[i - 1] * Ad;

  for (int i = 0; i < k; ++i) {
    out.pred_x0.middleRows(12 * i, 12) =
        Ad_powers[i + 1].topRows(12);
    Eigen::MatrixXd Wi = Eigen::MatrixXd::Zero(13, 6);
    for (int l = 0; l <= i; ++l) Wi += Ad_powers[l] * W;
    out.pred_w.middleRows(12 * i, 12) = Wi.topRows(12);
    for (int j = 0; j <= i; ++j) {
      const int cols = static_cast<int>(Bd_step[j].cols());
      if (cols == 0) continue;
      out.pred_u.block(12 * i, var_offset[j], 12, cols) =
          (Ad_powers[i - j] * Bd_step[j]).topRows(12);
    }
  }

  Eigen::VectorXd xd_stack(12 * k);
  for (int i = 0; i < k; ++i) xd_stack.segment<12>(12 * i) = desired[i + 1];

  Eigen::VectorXd q_stack(12 * k);
  for (int i = 0; i < k; ++i) q_stack.segment<12>(12 * i) = config_.q_diag;

  const Eigen::MatrixXd qu = q_stack.asDiagonal() * out.pred_u;
  out.qp.hessian =
      2.0 * (out.pred_u.transpose() * qu +
             config_.r_scale * Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd drift =
      out.pred_x0 * out.x0c + out.pred_w * u_a - xd_stack;
  out.qp.linear_cost = 2.0 * qu.transpose() * drift;

  int m = 0;
  for (int i = 0; i < k; ++i)
    for (bool s : schedule.flags[i]) m += s ? 5 : 0;
  out.qp.constraint_matrix = Eigen::MatrixXd::Zero(m, n);
  out.qp.lower_bounds = Eigen::VectorXd::Zero(m);
  out.qp.upper_bounds = Eigen::VectorXd::Zero(m);
  int row = 0, col = 0;
  for (int i = 0; i < k; ++i) {
    for (int leg = 0; leg < 4; ++leg) {
      if (!schedule.flags[i][leg]) continue;
      append_friction_rows(nominal_, row, col, out.qp.constraint_matrix,
                           out.qp.lower_bounds, out.qp.upper_bounds);
      row += 5;
      col += 3;
    }
  }
  return out;
}

MpcController::StepResult MpcController::step(
    const RobotState& state, const ContactSchedule& schedule,
    const FootSet& feet, const std::vector<Vec12>& desired, const Vec6& u_a) {
  MpcPrediction pred = build_prediction(state, schedule, feet, desired, u_a);
  qp::QpSolution sol = solver_.solve(pred.qp);

  StepResult res;
  res.status = sol.status;
  res.kkt_residual = sol.kkt_residual;
  res.iterations = sol.iterations;

  int c = 0;
  for (int leg = 0; leg < 4; ++leg) {
    if (!pred.stance[0][leg]) continue;
    res.forces.segment<3>(3 * leg) = sol.primal.segment<3>(3 * c);
    ++c;
  }

  const Eigen::VectorXd x_pred =
      pred.pred_x0 * pred.x0c + pred.pred_u * sol.primal + pred.pred_w * u_a;
  res.predicted.resize(config_.horizon);
  for (int i = 0; i < config_.horizon; ++i)
    res.predicted[i] = x_pred.segment<12>(12 * i);
  return res;
}

}  // namespace quadloco
