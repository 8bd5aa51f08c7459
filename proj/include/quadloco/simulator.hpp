#pragma once

#include <array>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "quadloco/balance_controller.hpp"
#include "quadloco/l1_adaptive.hpp"
#include "quadloco/mpc_controller.hpp"
#include "quadloco/scenario.hpp"
#include "quadloco/swing.hpp"

namespace quadloco {

enum class RunStatus { Ok, Fallen, SolverFailure };

std::string to_string(RunStatus s);

/// One record per 1 ms tick.
struct LogRecord {
  double t = 0.0;
  Vec12 state = Vec12::Zero();
  Vec12 desired = Vec12::Zero();
  Vec12 reference = Vec12::Zero();   // x_hat (zero for non-adaptive runs)
  Vec12 forces_cmd = Vec12::Zero();
  Vec12 forces_act = Vec12::Zero();
  Vec6 alpha = Vec6::Zero();
  Vec6 beta = Vec6::Zero();
  Vec6 theta = Vec6::Zero();
  Vec6 u_a = Vec6::Zero();
  std::array<bool, 4> contact{true, true, true, true};
  int solver_iterations = 0;
  double solver_residual = 0.0;
  RunStatus status = RunStatus::Ok;
};

struct RunSummary {
  RunStatus status = RunStatus::Ok;
  double end_time = 0.0;       // time of the last completed tick
  double fall_time = -1.0;
  double rms_height_error = 0.0;   // after a 10% transient window
  double ss_height_error = 0.0;    // mean |z - z_d| over the last 25%
  double max_height_error = 0.0;
  double max_abs_roll = 0.0;
  double ss_pitch_error = 0.0;     // mean |pitch - pitch_d| over the last 25%
  double max_theta_inf = 0.0;
  bool projection_ok = true;       // estimates stayed inside their bounds
  std::string csv_path;
};

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& config);
  ~Simulator();

  /// Runs the full scenario (or until a fall / solver failure).
  RunSummary run();

  /// Advances exactly one 1 ms tick; returns false once the run is over.
  bool step();

  const std::vector<LogRecord>& log() const { return log_; }
  const RobotState& state() const { return state_; }
  const FootSet& feet() const { return feet_; }
  RunStatus status() const { return status_; }

  static void write_csv(const std::vector<LogRecord>& log, std::ostream& out);
  static RunSummary summarize(const std::vector<LogRecord>& log,
                              const ScenarioConfig& config);

 private:
  struct CommandSample {
    Vec3 v_world = Vec3::Zero();  // commanded xy velocity in world frame
    double yaw_rate = 0.0;
  };

  CommandSample command_at(double t, double yaw) const;
  void update_desired(int tick);
  void update_gait(double t);
  std::vector<Vec12> desired_horizon(double t) const;
  void run_controllers(int tick);
  void run_reference(int tick);
  void apply_terrain(double t);
  void integrate_plant(double t);
  bool fallen() const;
  bool mpc_due(int tick) const;

  ScenarioConfig cfg_;
  double dt_ = 1e-3;

  RobotState state_;
  RobotState desired_;
  FootSet feet_;
  std::array<SwingPlan, 4> swing_;
  std::array<bool, 4> prev_stance_{true, true, true, true};
  std::array<double, 4> penetration_{};

  StanceForces forces_cmd_ = StanceForces::Zero();
  StanceForces forces_act_ = StanceForces::Zero();
  StanceForces ref_forces_ = StanceForces::Zero();
  bool ref_initialized_ = false;

  std::unique_ptr<BalanceController> balance_;
  std::unique_ptr<BalanceController> ref_balance_;
  std::unique_ptr<MpcController> mpc_;
  std::unique_ptr<MpcController> ref_mpc_;
  std::unique_ptr<L1Adaptive> adaptive_;

  int tick_ = 0;
  int total_ticks_ = 0;
  RunStatus status_ = RunStatus::Ok;
  int last_iterations_ = 0;
  double last_residual_ = 0.0;
  std::vector<LogRecord> log_;
};

/// Runs a scenario end to end; writes the CSV log when csv_path is
/// non-empty. Deterministic: identical configs give identical logs.
RunSummary run_scenario(const ScenarioConfig& config,
                        const std::string& csv_path = "");

}  // namespace quadloco
