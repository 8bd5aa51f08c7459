#include "quadloco/l1_adaptive.hpp"

#include <cmath>

namespace quadloco {

void LowPassFilter::configure(double omega_n, double zeta, double dt) {
  // bilinear transform of wn^2 / (s^2 + 2 zeta wn s + wn^2)
  const double K = 2.0 / dt;
  const double a0 = K * K + 2.0 * zeta * omega_n * K + omega_n * omega_n;
  b0_ = omega_n * omega_n / a0;
  b1_ = 2.0 * b0_;
  b2_ = b0_;
  a1_ = (2.0 * omega_n * omega_n - 2.0 * K * K) / a0;
  a2_ = (K * K - 2.0 * zeta * omega_n * K + omega_n * omega_n) / a0;
  reset();
}

void LowPassFilter::reset() {
  x1_.setZero();
  x2_.setZero();
  y1_.setZero();
  y2_.setZero();
}

Vec6 LowPassFilter::step(const Vec6& input) {
  Vec6 y = b0_ * input + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = input;
  y2_ = y1_;
  y1_ = y;
  return y;
}

Vec6 projection_update(const Vec6& current, const Vec6& y, const Vec6& bound,
                       double eps, const Vec6& gamma, double dt) {
  Vec6 next;
  for (int j = 0; j < 6; ++j) {
    const double b = bound[j];
    const double theta = current[j];
    const double flow = gamma[j] * y[j];
    double scale = 1.0;
    const bool outward = theta * flow > 0.0;
    const double inner = (1.0 - eps) * b;
    if (outward && std::abs(theta) > inner)
      scale = std::max(0.0, (b - std::abs(theta)) / (eps * b));
    double v = theta + scale * flow * dt;
    next[j] = std::clamp(v, -b, b);
  }
  return next;
}

std::pair<Vec6, Vec6> projection_functions(const Vec12& e_tilde,
                                           const Vec12& e, const Mat12& P) {
  // B = [0_6; I_6], so B'P e_tilde is the lower half of P e_tilde
  const Vec6 bpe = (P * e_tilde).tail<6>();
  return {-bpe * e.norm(), -bpe};
}

void L1Adaptive::adaptation_tick(const RobotState& actual,
                                 const RobotState& desired) {
  const Vec12 e_tilde =
      reference_.x_hat.as_vector() - actual.as_vector();
  const Vec12 e = state_error(actual, desired).as_vector();

  auto [y_alpha, y_beta] = projection_functions(e_tilde, e, P_);
  estimate_.alpha_hat =
      projection_update(estimate_.alpha_hat, y_alpha, params_.alpha_max,
                        params_.projection_eps, params_.gamma, dt_);
  estimate_.beta_hat =
      projection_update(estimate_.beta_hat, y_beta, params_.beta_max,
                        params_.projection_eps, params_.gamma, dt_);
  estimate_.theta_hat = estimate_.alpha_hat * e.norm() + estimate_.beta_hat;
  estimate_.u_a = filter_.step(-estimate_.theta_hat);
}

void L1Adaptive::propagate_reference(const StanceForces& reference_forces,
                                     const FootSet& real_feet) {
  reference_.forces = reference_forces;
  const Vec6 injected = estimate_.u_a + estimate_.theta_hat;

  auto deriv = [&](const Vec12& x) -> Vec12 {
    const RobotState s = RobotState::from_vector(x);
    const ContinuousModel m =
        continuous_matrices(s, real_feet, nominal_, InertiaFrame::YawOnly);
    Vec12 dx = m.D * x + m.H * reference_forces + m.gravity_affine;
    dx.tail<6>() += injected;
    return dx;
  };

  const Vec12 x0 = reference_.x_hat.as_vector();
  const Vec12 k1 = deriv(x0);
  const Vec12 k2 = deriv(x0 + 0.5 * dt_ * k1);
  const Vec12 k3 = deriv(x0 + 0.5 * dt_ * k2);
  const Vec12 k4 = deriv(x0 + dt_ * k3);
  reference_.x_hat =
      RobotState::from_vector(x0 + dt_ / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4));
}

void L1Adaptive::reset(const RobotState& initial) {
  estimate_ = UncertaintyEstimate{};
  filter_.reset();
  reference_.x_hat = initial;
  reference_.forces.setZero();
}

}  // namespace quadloco
