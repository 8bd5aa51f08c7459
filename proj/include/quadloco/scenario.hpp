#pragma once

#include <array>
#include <string>
#include <vector>

#include "quadloco/balance_controller.hpp"
#include "quadloco/gait.hpp"
#include "quadloco/l1_adaptive.hpp"
#include "quadloco/mpc_controller.hpp"
#include "quadloco/srb_model.hpp"
#include "quadloco/terrain.hpp"

namespace quadloco {

enum class ControllerType { Balance, AdaptiveBalance, Mpc, AdaptiveMpc };

std::string to_string(ControllerType c);
ControllerType controller_from_string(const std::string& s);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommandSegment {
  double t = 0.0;
  double vx = 0.0, vy = 0.0, yaw_rate = 0.0;
};

struct Disturbance {
  enum class Kind { AddedMass, Wrench } kind = Kind::AddedMass;
  double start = 0.0;
  double end = 0.0;
  // AddedMass
  double mass = 0.0;
  Vec3 offset = Vec3::Zero();  // body frame
  // Wrench, linearly ramped from start to end values
  Vec3 force_start = Vec3::Zero(), force_end = Vec3::Zero();
  Vec3 torque_start = Vec3::Zero(), torque_end = Vec3::Zero();
};

struct SimSettings {
  int mpc_period_ms = 3;
  bool exact_300hz = false;  // 3-3-4 ms macro-period pattern
  int ref_mpc_period_ms = 33;
  int ref_mpc_offset_ms = 2;
  bool gyroscopic_term = true;  // w x (I w) in the plant
  double fall_angle = 0.6;      // rad, roll or pitch
  double fall_height = 0.12;    // m
};

struct ScenarioConfig {
  double duration = 5.0;
  ControllerType controller = ControllerType::Mpc;
  double z0 = 0.3;
  double swing_apex = 0.08;
  // body-frame hip offsets, legs FR, FL, RR, RL
  std::array<Vec3, 4> hip_offsets = {
      Vec3(0.183, -0.132, 0), Vec3(0.183, 0.132, 0),
      Vec3(-0.183, -0.132, 0), Vec3(-0.183, 0.132, 0)};

  RobotParams nominal;
  RobotParams true_params;  // plant-side, unknown to controllers
  GaitSpec gait = GaitSpec::stand();
  TerrainModel terrain;
  std::vector<CommandSegment> command = {{}};
  std::vector<Disturbance> disturbances;
  MpcConfig mpc;
  BalanceGains balance;
  AdaptiveParams adaptive;
  SimSettings sim;

  /// Parses a scenario file. Unknown keys are errors.
  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig load(const std::string& path);
};

/// Loads a scenario, overriding one dotted config path (e.g. "mpc.dt")
/// with a raw JSON value; used by the sweep command.
ScenarioConfig load_with_override(const std::string& path,
                                  const std::string& dotted_key,
                                  const std::string& json_value);

}  // namespace quadloco
