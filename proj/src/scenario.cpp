#include "quadloco/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace quadloco {

using nlohmann::json;

std::string to_string(ControllerType c) {
  switch (c) {
    case ControllerType::Balance: return "balance";
    case ControllerType::AdaptiveBalance: return "adaptive-balance";
    case ControllerType::Mpc: return "mpc";
    case ControllerType::AdaptiveMpc: return "adaptive-mpc";
  }
  return "?";
}

ControllerType controller_from_string(const std::string& s) {
  if (s == "balance") return ControllerType::Balance;
  if (s == "adaptive-balance") return ControllerType::AdaptiveBalance;
  if (s == "mpc") return ControllerType::Mpc;
  if (s == "adaptive-mpc") return ControllerType::AdaptiveMpc;
  throw ConfigError("unknown controller: " + s);
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& section) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + section);
}

Vec3 parse_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(where + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N)
    throw ConfigError(where + " must be a " + std::to_string(N) +
                      "-element array");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = j[i].get<double>();
  return v;
}

void parse_robot_params(const json& j, RobotParams& p,
                        const std::string& section) {
  check_keys(j, {"mass", "inertia", "gravity", "friction", "fz_min", "fz_max"},
             section);
  if (j.contains("mass")) p.mass = j["mass"].get<double>();
  if (j.contains("inertia")) {
    const json& ji = j["inertia"];
    if (ji.is_array() && ji.size() == 3)
      p.body_inertia = parse_vec3(ji, section + ".inertia").asDiagonal();
    else if (ji.is_array() && ji.size() == 9) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          p.body_inertia(r, c) = ji[3 * r + c].get<double>();
    } else {
      throw ConfigError(section + ".inertia must have 3 or 9 entries");
    }
  }
  if (j.contains("gravity")) p.gravity = parse_vec3(j["gravity"], section + ".gravity");
  if (j.contains("friction")) p.friction_coeff = j["friction"].get<double>();
  if (j.contains("fz_min")) p.fz_min = j["fz_min"].get<double>();
  if (j.contains("fz_max")) p.fz_max = j["fz_max"].get<double>();
  if (!p.valid()) throw ConfigError(section + ": invalid robot parameters");
}

GaitSpec parse_gait(const json& j) {
  check_keys(j, {"type", "period", "duty", "offsets"}, "gait");
  std::string type = j.value("type", "stand");
  GaitSpec g;
  if (type == "stand") g = GaitSpec::stand();
  else if (type == "trot") g = GaitSpec::trot();
  else if (type == "bound") g = GaitSpec::bound();
  else if (type == "walk") g = GaitSpec::quasi_static_walk();
  else throw ConfigError("unknown gait type: " + type);
  if (j.contains("period")) g.period = j["period"].get<double>();
  if (j.contains("duty")) {
    if (j["duty"].is_number())
      g.duty.fill(j["duty"].get<double>());
    else {
      auto d = parse_vec<4>(j["duty"], "gait.duty");
      for (int i = 0; i < 4; ++i) g.duty[i] = d[i];
    }
  }
  if (j.contains("offsets")) {
    auto o = parse_vec<4>(j["offsets"], "gait.offsets");
    for (int i = 0; i < 4; ++i) g.offsets[i] = o[i];
  }
  for (int i = 0; i < 4; ++i)
    if (!(g.duty[i] > 0 && g.duty[i] <= 1))
      throw ConfigError("gait duty out of (0,1]");
  return g;
}

TerrainModel parse_terrain(const json& j) {
  check_keys(j, {"kind", "a0", "a1", "a2", "stiffness", "damping", "force_cap"},
             "terrain");
  TerrainModel t;
  std::string kind = j.value("kind", "rigid-flat");
  if (kind == "rigid-flat") t.kind = TerrainKind::RigidFlat;
  else if (kind == "rigid-slope") t.kind = TerrainKind::RigidSlope;
  else if (kind == "soft") t.kind = TerrainKind::Soft;
  else throw ConfigError("unknown terrain kind: " + kind);
  t.a0 = j.value("a0", 0.0);
  t.a1 = j.value("a1", 0.0);
  t.a2 = j.value("a2", 0.0);
  t.soft_stiffness = j.value("stiffness", t.soft_stiffness);
  t.soft_damping = j.value("damping", t.soft_damping);
  t.soft_force_cap = j.value("force_cap", t.soft_force_cap);
  if (t.kind == TerrainKind::Soft &&
      !(t.soft_stiffness > 0 && t.soft_damping > 0))
    throw ConfigError("soft terrain requires positive stiffness and damping");
  return t;
}

ScenarioConfig parse(const json& j) {
  ScenarioConfig cfg;
  check_keys(j,
             {"duration", "controller", "z0", "swing_apex", "hip_offsets",
              "nominal", "true", "gait", "terrain", "command", "disturbances",
              "mpc", "balance", "adaptive", "sim"},
             "scenario");

  cfg.duration = j.value("duration", cfg.duration);
  if (cfg.duration <= 0) throw ConfigError("duration must be positive");
  if (j.contains("controller"))
    cfg.controller = controller_from_string(j["controller"].get<std::string>());
  cfg.z0 = j.value("z0", cfg.z0);
  cfg.swing_apex = j.value("swing_apex", cfg.swing_apex);
  if (j.contains("hip_offsets")) {
    const json& h = j["hip_offsets"];
    if (!h.is_array() || h.size() != 4)
      throw ConfigError("hip_offsets must list 4 vectors");
    for (int i = 0; i < 4; ++i)
      cfg.hip_offsets[i] = parse_vec3(h[i], "hip_offsets");
  }

  if (j.contains("nominal")) parse_robot_params(j["nominal"], cfg.nominal, "nominal");
  cfg.true_params = cfg.nominal;
  if (j.contains("true")) parse_robot_params(j["true"], cfg.true_params, "true");
  if (j.contains("gait")) cfg.gait = parse_gait(j["gait"]);
  if (j.contains("terrain")) cfg.terrain = parse_terrain(j["terrain"]);

  if (j.contains("command")) {
    cfg.command.clear();
    for (const json& s : j["command"]) {
      check_keys(s, {"t", "vx", "vy", "yaw_rate"}, "command");
      CommandSegment seg;
      seg.t = s.value("t", 0.0);
      seg.vx = s.value("vx", 0.0);
      seg.vy = s.value("vy", 0.0);
      seg.yaw_rate = s.value("yaw_rate", 0.0);
      cfg.command.push_back(seg);
    }
    if (cfg.command.empty()) cfg.command.push_back({});
  }

  if (j.contains("disturbances")) {
    for (const json& d : j["disturbances"]) {
      check_keys(d,
                 {"type", "start", "end", "mass", "offset", "force_start",
                  "force_end", "torque_start", "torque_end"},
                 "disturbances");
      Disturbance dist;
      std::string type = d.value("type", "added-mass");
      if (type == "added-mass") dist.kind = Disturbance::Kind::AddedMass;
      else if (type == "wrench") dist.kind = Disturbance::Kind::Wrench;
      else throw ConfigError("unknown disturbance type: " + type);
      dist.start = d.value("start", 0.0);
      dist.end = d.value("end", 1e30);
      dist.mass = d.value("mass", 0.0);
      if (d.contains("offset")) dist.offset = parse_vec3(d["offset"], "offset");
      if (d.contains("force_start"))
        dist.force_start = parse_vec3(d["force_start"], "force_start");
      if (d.contains("force_end"))
        dist.force_end = parse_vec3(d["force_end"], "force_end");
      else
        dist.force_end = dist.force_start;
      if (d.contains("torque_start"))
        dist.torque_start = parse_vec3(d["torque_start"], "torque_start");
      if (d.contains("torque_end"))
        dist.torque_end = parse_vec3(d["torque_end"], "torque_end");
      else
        dist.torque_end = dist.torque_start;
      cfg.disturbances.push_back(dist);
    }
  }

  if (j.contains("mpc")) {
    const json& m = j["mpc"];
    check_keys(m, {"horizon", "dt", "q_diag", "r_scale"}, "mpc");
    cfg.mpc.horizon = m.value("horizon", cfg.mpc.horizon);
    cfg.mpc.dt_mpc = m.value("dt", cfg.mpc.dt_mpc);
    if (m.contains("q_diag")) cfg.mpc.q_diag = parse_vec<12>(m["q_diag"], "mpc.q_diag");
    cfg.mpc.r_scale = m.value("r_scale", cfg.mpc.r_scale);
    if (cfg.mpc.horizon < 1 || cfg.mpc.dt_mpc <= 0)
      throw ConfigError("mpc horizon/dt out of range");
  }

  if (j.contains("balance")) {
    const json& b = j["balance"];
    check_keys(b, {"kp", "kd", "s_diag", "gamma1", "gamma2"}, "balance");
    if (b.contains("kp")) cfg.balance.kp = parse_vec<6>(b["kp"], "balance.kp");
    if (b.contains("kd")) cfg.balance.kd = parse_vec<6>(b["kd"], "balance.kd");
    if (b.contains("s_diag"))
      cfg.balance.S = parse_vec<6>(b["s_diag"], "balance.s_diag").asDiagonal();
    cfg.balance.gamma1 = b.value("gamma1", cfg.balance.gamma1);
    cfg.balance.gamma2 = b.value("gamma2", cfg.balance.gamma2);
    if (cfg.balance.kp.minCoeff() <= 0 || cfg.balance.kd.minCoeff() <= 0)
      throw ConfigError("balance gains must be strictly positive");
  }

  if (j.contains("adaptive")) {
    const json& a = j["adaptive"];
    check_keys(a, {"gamma", "omega_n", "zeta", "alpha_max", "beta_max", "eps"},
               "adaptive");
    if (a.contains("gamma")) cfg.adaptive.gamma = parse_vec<6>(a["gamma"], "adaptive.gamma");
    cfg.adaptive.omega_n = a.value("omega_n", cfg.adaptive.omega_n);
    cfg.adaptive.zeta = a.value("zeta", cfg.adaptive.zeta);
    if (a.contains("alpha_max"))
      cfg.adaptive.alpha_max = parse_vec<6>(a["alpha_max"], "adaptive.alpha_max");
    if (a.contains("beta_max"))
      cfg.adaptive.beta_max = parse_vec<6>(a["beta_max"], "adaptive.beta_max");
    cfg.adaptive.projection_eps = a.value("eps", cfg.adaptive.projection_eps);
    if (!(cfg.adaptive.omega_n > 0) || !(cfg.adaptive.zeta > 0 && cfg.adaptive.zeta < 2))
      throw ConfigError("adaptive filter parameters out of range");
  }

  if (j.contains("sim")) {
    const json& s = j["sim"];
    check_keys(s,
               {"mpc_period_ms", "exact_300hz", "ref_mpc_period_ms",
                "ref_mpc_offset_ms", "gyroscopic_term", "fall_angle",
                "fall_height"},
               "sim");
    cfg.sim.mpc_period_ms = s.value("mpc_period_ms", cfg.sim.mpc_period_ms);
    cfg.sim.exact_300hz = s.value("exact_300hz", cfg.sim.exact_300hz);
    cfg.sim.ref_mpc_period_ms = s.value("ref_mpc_period_ms", cfg.sim.ref_mpc_period_ms);
    cfg.sim.ref_mpc_offset_ms = s.value("ref_mpc_offset_ms", cfg.sim.ref_mpc_offset_ms);
    cfg.sim.gyroscopic_term = s.value("gyroscopic_term", cfg.sim.gyroscopic_term);
    cfg.sim.fall_angle = s.value("fall_angle", cfg.sim.fall_angle);
    cfg.sim.fall_height = s.value("fall_height", cfg.sim.fall_height);
  }
  return cfg;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }
  return parse(j);
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ScenarioConfig load_with_override(const std::string& path,
                                  const std::string& dotted_key,
                                  const std::string& json_value) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }
  json* node = &j;
  std::string key = dotted_key;
  for (size_t pos = key.find('.'); pos != std::string::npos;
       pos = key.find('.')) {
    node = &(*node)[key.substr(0, pos)];
    key = key.substr(pos + 1);
  }
  try {
    (*node)[key] = json::parse(json_value);
  } catch (const json::exception&) {
    (*node)[key] = json_value;  // plain string value
  }
  return parse(j);
}

}  // namespace quadloco
