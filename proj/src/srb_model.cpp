#include "quadloco/srb_model.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace quadloco {

bool RobotParams::valid() const {
  if (!(mass > 0) || !(friction_coeff > 0)) return false;
  if (!(fz_min >= 0) || !(fz_max > fz_min)) return false;
  if ((body_inertia - body_inertia.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat3> es(body_inertia, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0;
}

bool RobotState::valid() const {
  if (!as_vector().allFinite()) return false;
  return std::abs(euler_zyx[0]) < M_PI_2 && std::abs(euler_zyx[1]) < M_PI_2;
}

Mat3 yaw_rotation(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 euler_zyx_rotation(const Vec3& euler) {
  return (Eigen::AngleAxisd(euler[2], Vec3::UnitZ()) *
          Eigen::AngleAxisd(euler[1], Vec3::UnitY()) *
          Eigen::AngleAxisd(euler[0], Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 rotation_log(const Mat3& R) {
  const double cos_angle =
      std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  if (angle > M_PI - 1e-6) throw DegenerateRotation();
  Vec3 axis_raw(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (angle < 1e-8) return 0.5 * axis_raw;  // first-order series
  return angle / (2.0 * std::sin(angle)) * axis_raw;
}

ContinuousModel continuous_matrices(const RobotState& state,
                                    const FootSet& feet,
                                    const RobotParams& params,
                                    InertiaFrame frame) {
  ContinuousModel m;
  const Mat3 Rz = yaw_rotation(state.yaw());
  const Mat3 R = frame == InertiaFrame::FullRotation
                     ? euler_zyx_rotation(state.euler_zyx)
                     : Rz;
  const Mat3 I_world = R * params.body_inertia * R.transpose();

  m.D.block<3, 3>(0, 6).setIdentity();
  m.D.block<3, 3>(3, 9) = Rz;

  m.M.topLeftCorner<3, 3>() = params.mass * Mat3::Identity();
  m.M.bottomRightCorner<3, 3>() = I_world;

  for (int i = 0; i < 4; ++i) {
    m.A.block<3, 3>(0, 3 * i).setIdentity();
    m.A.block<3, 3>(3, 3 * i) = skew(feet.positions[i] - state.com_position);
  }

  Mat6 M_inv = Mat6::Zero();
  M_inv.topLeftCorner<3, 3>() =
      Mat3::Identity() / params.mass;
  M_inv.bottomRightCorner<3, 3>() = I_world.inverse();
  m.H.bottomRows<6>() = M_inv * m.A;

  m.gravity_affine.segment<3>(6) = params.gravity;
  return m;
}

ExtendedModel extended_matrices(const RobotState& state, const FootSet& feet,
                                const RobotParams& params, InertiaFrame frame) {
  const ContinuousModel cm = continuous_matrices(state, feet, params, frame);
  ExtendedModel em;
  em.Dc.topLeftCorner<12, 12>() = cm.D;
  em.Dc.block<3, 1>(6, 12) = params.gravity / params.gravity.norm();
  em.Hc.topRows<12>() = cm.H;
  return em;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_zoh(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = A * dt;
  aug.topRightCorner(n, m) = B * dt;
  const Eigen::MatrixXd expm = aug.exp();
  return {expm.topLeftCorner(n, n), expm.topRightCorner(n, m)};
}

StateError state_error(const RobotState& state, const RobotState& desired) {
  StateError e;
  e.e_p.head<3>() = state.com_position - desired.com_position;
  const Mat3 R = euler_zyx_rotation(state.euler_zyx);
  const Mat3 R_d = euler_zyx_rotation(desired.euler_zyx);
  e.e_p.tail<3>() = rotation_log(R * R_d.transpose());
  e.e_d.head<3>() = state.com_velocity - desired.com_velocity;
  e.e_d.tail<3>() = state.angular_velocity - desired.angular_velocity;
  return e;
}

}  // namespace quadloco
