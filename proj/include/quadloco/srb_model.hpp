#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "quadloco/types.hpp"

namespace quadloco {

struct RobotParams {
  double mass = 12.0;
  Mat3 body_inertia =
      Eigen::Vector3d(0.017, 0.057, 0.065).asDiagonal().toDenseMatrix();
  Vec3 gravity{0.0, 0.0, -9.81};
  double friction_coeff = 0.6;
  double fz_min = 0.0;
  double fz_max = 500.0;

  bool valid() const;
};

/// Body state: COM position, ZYX Euler angles (roll, pitch, yaw),
/// COM velocity and angular velocity, all in world frame.
struct RobotState {
  Vec3 com_position = Vec3::Zero();
  Vec3 euler_zyx = Vec3::Zero();  // (roll, pitch, yaw)
  Vec3 com_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();

  Vec12 as_vector() const {
    Vec12 x;
    x << com_position, euler_zyx, com_velocity, angular_velocity;
    return x;
  }
  static RobotState from_vector(const Vec12& x) {
    RobotState s;
    s.com_position = x.segment<3>(0);
    s.euler_zyx = x.segment<3>(3);
    s.com_velocity = x.segment<3>(6);
    s.angular_velocity = x.segment<3>(9);
    return s;
  }
  double yaw() const { return euler_zyx[2]; }
  bool valid() const;
};

struct FootSet {
  std::array<Vec3, 4> positions{};
  std::array<bool, 4> contact{true, true, true, true};

  int stance_count() const {
    int c = 0;
    for (bool b : contact) c += b;
    return c;
  }
};

/// 12-vector of per-foot ground reaction forces, world frame. Swing feet
/// carry identically zero force.
using StanceForces = Vec12;

struct StateError {
  Vec6 e_p = Vec6::Zero();   // position, orientation (log map)
  Vec6 e_d = Vec6::Zero();   // linear, angular velocity
  Vec12 as_vector() const {
    Vec12 e;
    e << e_p, e_d;
    return e;
  }
};

struct DegenerateRotation : std::runtime_error {
  DegenerateRotation() : std::runtime_error("rotation angle at pi: log map ill-conditioned") {}
};

Mat3 yaw_rotation(double psi);
Mat3 euler_zyx_rotation(const Vec3& euler);  // R = Rz(psi) Ry(theta) Rx(phi)

/// Rotation vector of R (matrix log). Throws DegenerateRotation near pi.
Vec3 rotation_log(const Mat3& R);

enum class InertiaFrame {
  FullRotation,  // I_world = R I_body R^T, plant-side
  YawOnly        // I_world = Rz I_body Rz^T, controller model
};

struct ContinuousModel {
  Mat12 D = Mat12::Zero();
  Mat12 H = Mat12::Zero();
  Vec12 gravity_affine = Vec12::Zero();
  Mat6x12 A = Mat6x12::Zero();  // force-to-wrench map about the COM
  Mat6 M = Mat6::Zero();        // mass/world-inertia block
};

ContinuousModel continuous_matrices(const RobotState& state,
                                    const FootSet& feet,
                                    const RobotParams& params,
                                    InertiaFrame frame = InertiaFrame::YawOnly);

struct ExtendedModel {
  Mat13 Dc = Mat13::Zero();
  Mat13x12 Hc = Mat13x12::Zero();
};

/// Gravity folded into a 13th state equal to ||g||.
ExtendedModel extended_matrices(const RobotState& state, const FootSet& feet,
                                const RobotParams& params,
                                InertiaFrame frame = InertiaFrame::YawOnly);

/// Zero-order-hold discretization via the augmented matrix exponential.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_zoh(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt);

/// Tracking error per the SRB error convention: plain differences for
/// position and velocities, log-map rotation vector for orientation
/// (zero when R == R_d, positive when the body leads the target).
StateError state_error(const RobotState& state, const RobotState& desired);

}  // namespace quadloco
