#pragma once

#include "quadloco/srb_model.hpp"

namespace quadloco {

struct AdaptiveParams {
  Vec6 gamma = (Vec6() << 1, 1, 5, 2, 5, 1).finished() * 1e3;
  double omega_n = 60.0;  // rad/s
  double zeta = 0.7;
  Vec6 alpha_max = Vec6::Constant(20.0);
  Vec6 beta_max = (Vec6() << 30, 30, 60, 40, 40, 40).finished();
  double projection_eps = 0.1;
};

/// Second-order unity-DC-gain low-pass filter, bilinear discretization,
/// applied componentwise to six channels.
class LowPassFilter {
 public:
  LowPassFilter() { configure(60.0, 0.7, 1e-3); }
  LowPassFilter(double omega_n, double zeta, double dt) {
    configure(omega_n, zeta, dt);
  }
  void configure(double omega_n, double zeta, double dt);
  void reset();

  /// Advances one step; returns the filtered signal.
  Vec6 step(const Vec6& input);

  Vec6 output() const { return y1_; }
  // discrete transfer function coefficients (a0 normalized to 1)
  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

 private:
  double b0_ = 0, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  Vec6 x1_ = Vec6::Zero(), x2_ = Vec6::Zero();  // input history
  Vec6 y1_ = Vec6::Zero(), y2_ = Vec6::Zero();  // output history
};

struct UncertaintyEstimate {
  Vec6 alpha_hat = Vec6::Zero();
  Vec6 beta_hat = Vec6::Zero();
  Vec6 theta_hat = Vec6::Zero();
  Vec6 u_a = Vec6::Zero();  // = -C(s) theta_hat
};

struct ReferenceState {
  RobotState x_hat;
  StanceForces forces = StanceForces::Zero();
};

/// One Euler step of the projection-based adaptation law. The smooth
/// projection passes y through inside the eps-shrunk bound (or when y
/// points inward) and scales outward flow to zero at the bound.
Vec6 projection_update(const Vec6& current, const Vec6& y, const Vec6& bound,
                       double eps, const Vec6& gamma, double dt);

/// y_alpha = -B'P e_tilde ||e||,  y_beta = -B'P e_tilde.
std::pair<Vec6, Vec6> projection_functions(const Vec12& e_tilde,
                                           const Vec12& e, const Mat12& P);

/// Shared adaptive state machine: projection laws, filter, and the
/// reference-model propagation. Owned by a single control loop.
class L1Adaptive {
 public:
  L1Adaptive(AdaptiveParams params, RobotParams nominal, const Mat12& P,
             double dt)
      : params_(params),
        nominal_(nominal),
        P_(P),
        dt_(dt),
        filter_(params.omega_n, params.zeta, dt) {}

  /// Updates alpha/beta estimates from the reference-vs-real mismatch,
  /// recomputes theta_hat and refreshes u_a through the filter.
  void adaptation_tick(const RobotState& actual, const RobotState& desired);

  /// One RK4 step of the reference dynamics using nominal matrices and
  /// the real robot's foot positions.
  void propagate_reference(const StanceForces& reference_forces,
                           const FootSet& real_feet);

  void reset(const RobotState& initial);

  const UncertaintyEstimate& estimate() const { return estimate_; }
  const ReferenceState& reference() const { return reference_; }
  RobotState& reference_state() { return reference_.x_hat; }
  const AdaptiveParams& params() const { return params_; }
  const Mat12& lyapunov_p() const { return P_; }

 private:
  AdaptiveParams params_;
  RobotParams nominal_;
  Mat12 P_;
  double dt_;
  LowPassFilter filter_;
  UncertaintyEstimate estimate_;
  ReferenceState reference_;
};

}  // namespace quadloco
