#include "quadloco/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "quadloco/lyapunov.hpp"

namespace quadloco {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Fallen: return "fallen";
    case RunStatus::SolverFailure: return "solver-failure";
  }
  return "?";
}

namespace {

// Effective plant parameters and extra world wrench from the disturbance
// schedule at time t. An added point mass shifts mass and inertia
// (parallel axis about the body origin) and exerts a gravity moment at
// its body-frame offset.
struct PlantEffects {
  RobotParams params;
  Vec3 force = Vec3::Zero();   // world, at the COM
  Vec3 torque = Vec3::Zero();  // world
};

PlantEffects plant_effects(const ScenarioConfig& cfg, const RobotState& state,
                           double t) {
  PlantEffects fx;
  fx.params = cfg.true_params;
  const Mat3 R = euler_zyx_rotation(state.euler_zyx);
  for (const Disturbance& d : cfg.disturbances) {
    if (t < d.start || t > d.end) continue;
    if (d.kind == Disturbance::Kind::AddedMass) {
      fx.params.mass += d.mass;
      const Vec3& r = d.offset;
      fx.params.body_inertia +=
          d.mass * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
      fx.torque += (R * r).cross(d.mass * cfg.true_params.gravity);
    } else {
      const double span = std::max(d.end - d.start, 1e-9);
      const double s = std::clamp((t - d.start) / span, 0.0, 1.0);
      fx.force += d.force_start + s * (d.force_end - d.force_start);
      fx.torque += d.torque_start + s * (d.torque_end - d.torque_start);
    }
  }
  return fx;
}

Vec12 plant_derivative(const Vec12& x, const StanceForces& forces,
                       const FootSet& feet, const PlantEffects& fx,
                       bool gyroscopic) {
  const RobotState s = RobotState::from_vector(x);
  const ContinuousModel m =
      continuous_matrices(s, feet, fx.params, InertiaFrame::FullRotation);
  Vec12 dx = m.D * x + m.H * forces + m.gravity_affine;
  // External wrench and (optionally) the omega x I omega term that the
  // linearized model drops.
  const Mat3 I_w = m.M.bottomRightCorner<3, 3>();
  dx.segment<3>(6) += fx.force / fx.params.mass;
  Vec3 torque = fx.torque;
  if (gyroscopic)
    torque -= s.angular_velocity.cross(I_w * s.angular_velocity);
  dx.segment<3>(9) += I_w.ldlt().solve(torque);
  return dx;
}

}  // namespace

Simulator::Simulator(const ScenarioConfig& config) : cfg_(config) {
  total_ticks_ = static_cast<int>(std::llround(cfg_.duration / dt_));
  if (total_ticks_ < 1) total_ticks_ = 1;

  // Start standing on the terrain surface, aligned with it on slopes.
  const double ground = height_at(cfg_.terrain, 0.0, 0.0);
  state_.com_position = Vec3(0, 0, ground + cfg_.z0);
  if (cfg_.terrain.kind == TerrainKind::RigidSlope) {
    auto [roll, pitch] = slope_orientation(cfg_.terrain.a1, cfg_.terrain.a2);
    state_.euler_zyx = Vec3(roll, pitch, 0);
  }
  desired_ = state_;

  for (int i = 0; i < 4; ++i) {
    Vec3 p = state_.com_position + cfg_.hip_offsets[i];
    p.z() = height_at(cfg_.terrain, p.x(), p.y());
    feet_.positions[i] = p;
    swing_[i].liftoff = p;
    swing_[i].target = p;
    swing_[i].apex_height = cfg_.swing_apex;
  }
  const ContactState cs = contacts_at(cfg_.gait, 0.0);
  feet_.contact = cs.stance;
  prev_stance_ = cs.stance;

  const bool adaptive = cfg_.controller == ControllerType::AdaptiveBalance ||
                        cfg_.controller == ControllerType::AdaptiveMpc;
  if (cfg_.controller == ControllerType::Balance ||
      cfg_.controller == ControllerType::AdaptiveBalance) {
    balance_ = std::make_unique<BalanceController>(cfg_.nominal, cfg_.balance);
    if (adaptive)
      ref_balance_ =
          std::make_unique<BalanceController>(cfg_.nominal, cfg_.balance);
  } else {
    mpc_ = std::make_unique<MpcController>(cfg_.nominal, cfg_.mpc);
    if (adaptive)
      ref_mpc_ = std::make_unique<MpcController>(cfg_.nominal, cfg_.mpc);
  }
  if (adaptive) {
    const LyapunovCertificate cert =
        build_certificate(cfg_.balance.kp, cfg_.balance.kd);
    adaptive_ =
        std::make_unique<L1Adaptive>(cfg_.adaptive, cfg_.nominal, cert.P, dt_);
    adaptive_->reset(state_);
  }
  log_.reserve(total_ticks_);
}

Simulator::~Simulator() = default;

Simulator::CommandSample Simulator::command_at(double t, double yaw) const {
  CommandSegment active = cfg_.command.front();
  for (const CommandSegment& seg : cfg_.command)
    if (seg.t <= t) active = seg;
  CommandSample s;
  const Mat3 Rz = yaw_rotation(yaw);
  s.v_world = Rz * Vec3(active.vx, active.vy, 0.0);
  s.yaw_rate = active.yaw_rate;
  return s;
}

void Simulator::update_desired(int tick) {
  const double t = tick * dt_;
  const CommandSample cmd = command_at(t, desired_.yaw());
  desired_.com_position.x() += cmd.v_world.x() * dt_;
  desired_.com_position.y() += cmd.v_world.y() * dt_;
  desired_.euler_zyx.z() += cmd.yaw_rate * dt_;
  desired_.com_position.z() =
      cfg_.z0 + height_at(cfg_.terrain, desired_.com_position.x(),
                          desired_.com_position.y());
  desired_.com_velocity = cmd.v_world;
  desired_.angular_velocity = Vec3(0, 0, cmd.yaw_rate);

  if (cfg_.terrain.kind == TerrainKind::RigidSlope) {
    // Align the body with the plane the feet currently stand on.
    Vec3 plane(cfg_.terrain.a0, cfg_.terrain.a1, cfg_.terrain.a2);
    try {
      plane = fit_slope({feet_.positions.begin(), feet_.positions.end()});
    } catch (const DegeneratePlane&) {
    }
    auto [roll, pitch] = slope_orientation(plane[1], plane[2]);
    desired_.euler_zyx.x() = roll;
    desired_.euler_zyx.y() = pitch;
    desired_.com_velocity.z() =
        plane[1] * cmd.v_world.x() + plane[2] * cmd.v_world.y();
  }
}

void Simulator::update_gait(double t) {
  const ContactState cs = contacts_at(cfg_.gait, t);
  const CommandSample cmd = command_at(t, desired_.yaw());
  const Mat3 Rz = yaw_rotation(state_.yaw());
  const double swing_time =
      std::max((1.0 - cfg_.gait.duty[0]) * cfg_.gait.period, 1e-3);
  const double stance_time = cfg_.gait.duty[0] * cfg_.gait.period;
  const double g_norm = cfg_.nominal.gravity.norm();

  for (int i = 0; i < 4; ++i) {
    if (cs.stance[i]) {
      if (!prev_stance_[i]) {
        // touchdown: pin the foot to the surface, fresh contact
        Vec3 p = feet_.positions[i];
        p.z() = height_at(cfg_.terrain, p.x(), p.y());
        feet_.positions[i] = p;
        penetration_[i] = 0.0;
      }
    } else {
      if (prev_stance_[i]) {
        swing_[i].liftoff = feet_.positions[i];
        swing_[i].swing_duration = swing_time;
        penetration_[i] = 0.0;
      }
      const Vec3 hip = state_.com_position + Rz * cfg_.hip_offsets[i];
      swing_[i].target =
          footstep_target(hip, stance_time, cmd.v_world, state_.com_velocity,
                          cfg_.z0, g_norm, cfg_.terrain);
      const double s =
          std::clamp((cs.phase[i] - cfg_.gait.duty[i]) /
                         std::max(1.0 - cfg_.gait.duty[i], 1e-9),
                     0.0, 1.0);
      feet_.positions[i] = swing_position(swing_[i], s).first;
    }
    feet_.contact[i] = cs.stance[i];
    prev_stance_[i] = cs.stance[i];
  }
}

std::vector<Vec12> Simulator::desired_horizon(double t) const {
  std::vector<Vec12> traj(cfg_.mpc.horizon + 1);
  RobotState d = desired_;
  for (int j = 0; j <= cfg_.mpc.horizon; ++j) {
    traj[j] = d.as_vector();
    const CommandSample cmd = command_at(t + j * cfg_.mpc.dt_mpc, d.yaw());
    d.com_position += cmd.v_world * cfg_.mpc.dt_mpc;
    d.euler_zyx.z() += cmd.yaw_rate * cfg_.mpc.dt_mpc;
    d.com_position.z() = cfg_.z0 + height_at(cfg_.terrain, d.com_position.x(),
                                             d.com_position.y());
    d.com_velocity = cmd.v_world;
    d.com_velocity.z() = desired_.com_velocity.z();
    d.angular_velocity = Vec3(0, 0, cmd.yaw_rate);
  }
  return traj;
}

bool Simulator::mpc_due(int tick) const {
  if (cfg_.sim.exact_300hz) {
    const int r = tick % 10;
    return r == 0 || r == 3 || r == 6;
  }
  return tick % cfg_.sim.mpc_period_ms == 0;
}

void Simulator::run_controllers(int tick) {
  const double t = tick * dt_;
  const Vec6 u_a = adaptive_ ? adaptive_->estimate().u_a : Vec6::Zero();

  if (balance_) {
    const StateError e = state_error(state_, desired_);
    const Vec6 u = pd_input(e, cfg_.balance) + u_a;
    const Vec6 b_d = desired_dynamics(u, cfg_.nominal, state_);
    forces_cmd_ = balance_->solve_grf(b_d, feet_, state_);
    const auto& sol = balance_->last_solution();
    last_iterations_ = sol.iterations;
    last_residual_ = sol.kkt_residual;
    if (sol.status == qp::QpStatus::Infeasible ||
        (sol.status == qp::QpStatus::MaxIterations && sol.kkt_residual > 1e-2))
      status_ = RunStatus::SolverFailure;
    return;
  }

  if (mpc_due(tick)) {
    const ContactSchedule schedule =
        horizon_schedule(cfg_.gait, t, cfg_.mpc.dt_mpc, cfg_.mpc.horizon);
    const auto result =
        mpc_->step(state_, schedule, feet_, desired_horizon(t), u_a);
    forces_cmd_ = result.forces;
    last_iterations_ = result.iterations;
    last_residual_ = result.kkt_residual;
    if (result.status == qp::QpStatus::Infeasible ||
        (result.status == qp::QpStatus::MaxIterations &&
         result.kkt_residual > 1e-2))
      status_ = RunStatus::SolverFailure;
  } else {
    // zero-order hold between MPC ticks; feet that left stance carry
    // no force
    for (int i = 0; i < 4; ++i)
      if (!feet_.contact[i]) forces_cmd_.segment<3>(3 * i).setZero();
  }
}

void Simulator::run_reference(int tick) {
  if (!adaptive_) return;
  const double t = tick * dt_;
  const UncertaintyEstimate& est = adaptive_->estimate();

  if (ref_balance_) {
    // The compensation and injected-uncertainty channels enter the
    // reference dynamics directly, so the reference QP only realizes
    // the PD input.
    const StateError e = state_error(adaptive_->reference().x_hat, desired_);
    const Vec6 u_hat = pd_input(e, cfg_.balance);
    const Vec6 b_d = desired_dynamics(u_hat, cfg_.nominal,
                                      adaptive_->reference().x_hat);
    ref_forces_ = ref_balance_->solve_grf(b_d, feet_,
                                          adaptive_->reference().x_hat);
    ref_initialized_ = true;
  } else {
    const int offset = cfg_.sim.ref_mpc_offset_ms;
    if (tick >= offset &&
        (tick - offset) % cfg_.sim.ref_mpc_period_ms == 0) {
      const ContactSchedule schedule =
          horizon_schedule(cfg_.gait, t, cfg_.mpc.dt_mpc, cfg_.mpc.horizon);
      const Vec6 w = est.u_a + est.theta_hat;
      const auto result = ref_mpc_->step(adaptive_->reference().x_hat,
                                         schedule, feet_, desired_horizon(t),
                                         w);
      ref_forces_ = result.forces;
      ref_initialized_ = true;
    } else if (!ref_initialized_) {
      ref_forces_ = forces_cmd_;  // warm start until the first solve
    }
  }
  for (int i = 0; i < 4; ++i)
    if (!feet_.contact[i]) ref_forces_.segment<3>(3 * i).setZero();

  adaptive_->propagate_reference(ref_forces_, feet_);
}

void Simulator::apply_terrain(double t) {
  (void)t;
  forces_act_ = forces_cmd_;
  for (int i = 0; i < 4; ++i) {
    if (!feet_.contact[i]) {
      forces_act_.segment<3>(3 * i).setZero();
      continue;
    }
    if (cfg_.terrain.kind != TerrainKind::Soft) continue;
    const Vec3 cmd = forces_cmd_.segment<3>(3 * i);
    // contact compliance: the commanded normal force loads the ground
    // spring; the realized force is the spring force, a first-order
    // lag with time constant c/k
    const double k = cfg_.terrain.soft_stiffness;
    const double c = cfg_.terrain.soft_damping;
    penetration_[i] += dt_ * (cmd.z() - k * penetration_[i]) / c;
    penetration_[i] = std::max(penetration_[i], 0.0);
    FootContactState fc;
    fc.position = feet_.positions[i];
    fc.penetration = penetration_[i];
    fc.penetration_rate = 0.0;  // stance foot is static in world frame
    forces_act_.segment<3>(3 * i) = realize_force(cfg_.terrain, cmd, fc);
  }
}

void Simulator::integrate_plant(double t) {
  const PlantEffects fx = plant_effects(cfg_, state_, t);
  const bool gyro = cfg_.sim.gyroscopic_term;
  const Vec12 x0 = state_.as_vector();
  const Vec12 k1 = plant_derivative(x0, forces_act_, feet_, fx, gyro);
  const Vec12 k2 =
      plant_derivative(x0 + 0.5 * dt_ * k1, forces_act_, feet_, fx, gyro);
  const Vec12 k3 =
      plant_derivative(x0 + 0.5 * dt_ * k2, forces_act_, feet_, fx, gyro);
  const Vec12 k4 = plant_derivative(x0 + dt_ * k3, forces_act_, feet_, fx, gyro);
  state_ = RobotState::from_vector(x0 +
                                   (dt_ / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4));
}

bool Simulator::fallen() const {
  const double ground = height_at(cfg_.terrain, state_.com_position.x(),
                                  state_.com_position.y());
  const StateError e = state_error(state_, desired_);
  return std::abs(e.e_p[3]) > cfg_.sim.fall_angle ||
         std::abs(e.e_p[4]) > cfg_.sim.fall_angle ||
         state_.com_position.z() - ground < cfg_.sim.fall_height;
}

bool Simulator::step() {
  if (status_ != RunStatus::Ok || tick_ >= total_ticks_) return false;
  const double t = tick_ * dt_;

  update_desired(tick_);
  update_gait(t);
  if (adaptive_) adaptive_->adaptation_tick(state_, desired_);
  run_controllers(tick_);
  run_reference(tick_);
  apply_terrain(t);

  LogRecord rec;
  rec.t = t;
  rec.state = state_.as_vector();
  rec.desired = desired_.as_vector();
  rec.forces_cmd = forces_cmd_;
  rec.forces_act = forces_act_;
  rec.contact = feet_.contact;
  rec.solver_iterations = last_iterations_;
  rec.solver_residual = last_residual_;
  if (adaptive_) {
    rec.reference = adaptive_->reference().x_hat.as_vector();
    rec.alpha = adaptive_->estimate().alpha_hat;
    rec.beta = adaptive_->estimate().beta_hat;
    rec.theta = adaptive_->estimate().theta_hat;
    rec.u_a = adaptive_->estimate().u_a;
  }

  if (status_ == RunStatus::Ok) {
    integrate_plant(t);
    if (fallen()) status_ = RunStatus::Fallen;
  }
  rec.status = status_;
  log_.push_back(rec);
  ++tick_;
  return status_ == RunStatus::Ok && tick_ < total_ticks_;
}

RunSummary Simulator::run() {
  while (step()) {
  }
  if (log_.empty()) step();
  return summarize(log_, cfg_);
}

void Simulator::write_csv(const std::vector<LogRecord>& log,
                          std::ostream& out) {
  out << "t";
  const char* base[] = {"x", "y", "z", "roll", "pitch", "yaw",
                        "vx", "vy", "vz", "wx", "wy", "wz"};
  for (const char* c : base) out << "," << c;
  for (const char* c : base) out << "," << c << "d";
  for (const char* c : base) out << "," << c << "hat";
  for (int i = 1; i <= 4; ++i)
    out << ",F" << i << "x,F" << i << "y,F" << i << "z";
  for (int i = 1; i <= 4; ++i)
    out << ",Fa" << i << "x,Fa" << i << "y,Fa" << i << "z";
  for (const char* n : {"alpha", "beta", "theta", "ua"})
    for (int i = 1; i <= 6; ++i) out << "," << n << i;
  for (int i = 1; i <= 4; ++i) out << ",contact" << i;
  out << ",status\n";

  out << std::setprecision(17);
  for (const LogRecord& r : log) {
    out << r.t;
    for (int i = 0; i < 12; ++i) out << "," << r.state[i];
    for (int i = 0; i < 12; ++i) out << "," << r.desired[i];
    for (int i = 0; i < 12; ++i) out << "," << r.reference[i];
    for (int i = 0; i < 12; ++i) out << "," << r.forces_cmd[i];
    for (int i = 0; i < 12; ++i) out << "," << r.forces_act[i];
    for (int i = 0; i < 6; ++i) out << "," << r.alpha[i];
    for (int i = 0; i < 6; ++i) out << "," << r.beta[i];
    for (int i = 0; i < 6; ++i) out << "," << r.theta[i];
    for (int i = 0; i < 6; ++i) out << "," << r.u_a[i];
    for (int i = 0; i < 4; ++i) out << "," << (r.contact[i] ? 1 : 0);
    out << "," << to_string(r.status) << "\n";
  }
}

RunSummary Simulator::summarize(const std::vector<LogRecord>& log,
                                const ScenarioConfig& config) {
  RunSummary s;
  if (log.empty()) return s;
  s.status = log.back().status;
  s.end_time = log.back().t;
  if (s.status == RunStatus::Fallen) s.fall_time = log.back().t;

  const size_t n = log.size();
  const size_t skip = n / 10;       // transient window for RMS metrics
  const size_t tail = n - n / 4;    // steady-state window start
  double sum_sq = 0.0;
  size_t rms_count = 0;
  double tail_h = 0.0, tail_p = 0.0;
  size_t tail_count = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dh = log[i].state[2] - log[i].desired[2];
    const double dp = log[i].state[4] - log[i].desired[4];
    s.max_abs_roll = std::max(s.max_abs_roll, std::abs(log[i].state[3]));
    s.max_height_error = std::max(s.max_height_error, std::abs(dh));
    s.max_theta_inf =
        std::max(s.max_theta_inf, log[i].theta.lpNorm<Eigen::Infinity>());
    if (i >= skip) {
      sum_sq += dh * dh;
      ++rms_count;
    }
    if (i >= tail) {
      tail_h += std::abs(dh);
      tail_p += std::abs(dp);
      ++tail_count;
    }
    for (int k = 0; k < 6; ++k) {
      const double tol = 1e-9;
      if (std::abs(log[i].alpha[k]) > config.adaptive.alpha_max[k] + tol ||
          std::abs(log[i].beta[k]) > config.adaptive.beta_max[k] + tol)
        s.projection_ok = false;
    }
  }
  if (rms_count) s.rms_height_error = std::sqrt(sum_sq / rms_count);
  if (tail_count) {
    s.ss_height_error = tail_h / tail_count;
    s.ss_pitch_error = tail_p / tail_count;
  }
  return s;
}

RunSummary run_scenario(const ScenarioConfig& config,
                        const std::string& csv_path) {
  Simulator sim(config);
  RunSummary summary = sim.run();
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write log: " + csv_path);
    Simulator::write_csv(sim.log(), out);
    summary.csv_path = csv_path;
  }
  return summary;
}

}  // namespace quadloco
