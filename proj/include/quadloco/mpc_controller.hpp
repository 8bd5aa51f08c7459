#pragma once

#include <vector>

#include "quadloco/gait.hpp"
#include "quadloco/qp.hpp"
#include "quadloco/srb_model.hpp"

namespace quadloco {

struct MpcConfig {
  int horizon = 10;
  double dt_mpc = 0.03;
  Vec12 q_diag =
      (Vec12() << 2.5, 2.5, 20, 0.25, 0.25, 1.5, 0.2, 0.2, 0.2, 0.1, 0.1, 0.3)
          .finished();
  double r_scale = 1e-6;
};

/// State of the extended-state (adaptive) prediction model: X^c plus the
/// constant-over-horizon compensation signal u_a.
struct ExtendedState {
  Vec19 eta = Vec19::Zero();

  Vec13 xc() const { return eta.head<13>(); }
  Vec6 u_a() const { return eta.tail<6>(); }
};

ExtendedState embed_u_a(const RobotState& state, const Vec6& u_a,
                        double g_norm);

struct AdaptiveModel {
  Mat19 De = Mat19::Zero();
  Mat19x12 He = Mat19x12::Zero();
};

/// 19x19 extended matrices of the adaptive prediction model: u_a enters
/// the acceleration rows with unit gain and udot_a = 0.
AdaptiveModel extended_adaptive_matrices(const RobotState& state,
                                         const FootSet& feet,
                                         const RobotParams& params);

/// Condensed dense QP for one MPC solve, plus the bookkeeping needed to
/// map the primal back to per-foot forces and predicted states.
struct MpcPrediction {
  qp::QpProblem qp;
  std::vector<std::array<bool, 4>> stance;   // per step
  int num_force_vars = 0;
  Eigen::MatrixXd pred_x0;   // 12k x 13
  Eigen::MatrixXd pred_u;    // 12k x n
  Eigen::MatrixXd pred_w;    // 12k x 6 (u_a influence)
  Vec13 x0c = Vec13::Zero();
  Vec6 u_a = Vec6::Zero();
};

class MpcController {
 public:
  MpcController(RobotParams nominal, MpcConfig config)
      : nominal_(nominal), config_(config) {}

  /// Builds the condensed QP. The desired trajectory must have
  /// horizon + 1 samples; samples 1..k enter the cost. Yaw and foot
  /// positions are frozen at their time-0 values over the horizon.
  /// The baseline controller is the u_a = 0 special case.
  MpcPrediction build_prediction(const RobotState& state,
                                 const ContactSchedule& schedule,
                                 const FootSet& feet,
                                 const std::vector<Vec12>& desired,
                                 const Vec6& u_a = Vec6::Zero());

  struct StepResult {
    StanceForces forces = StanceForces::Zero();
    std::vector<Vec12> predicted;
    qp::QpStatus status = qp::QpStatus::MaxIterations;
    double kkt_residual = 0.0;
    int iterations = 0;
  };

  /// Solves the condensed QP and returns the first input plus the
  /// predicted open-loop states for logging.
  StepResult step(const RobotState& state, const ContactSchedule& schedule,
                  const FootSet& feet, const std::vector<Vec12>& desired,
                  const Vec6& u_a = Vec6::Zero());

  const MpcConfig& config() const { return config_; }
  const RobotParams& nominal() const { return nominal_; }

 private:
  RobotParams nominal_;
  MpcConfig config_;
  qp::QpSolver solver_;
};

}  // namespace quadloco
