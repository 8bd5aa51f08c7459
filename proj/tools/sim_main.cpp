// Scenario runner CLI. Exit codes: 0 ok, 2 fallen, 3 config error,
// 4 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadloco/lyapunov.hpp"
#include "quadloco/scenario.hpp"
#include "quadloco/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace quadloco;

namespace {

int status_code(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return 0;
    case RunStatus::Fallen: return 2;
    case RunStatus::SolverFailure: return 4;
  }
  return 1;
}

void print_summary(const std::string& label, const RunSummary& s) {
  std::cout << label << ": status=" << to_string(s.status)
            << " end_time=" << s.end_time
            << " rms_height_err=" << s.rms_height_error
            << " ss_height_err=" << s.ss_height_error
            << " max_|roll|=" << s.max_abs_roll
            << " ss_pitch_err=" << s.ss_pitch_error
            << " max_|theta|=" << s.max_theta_inf
            << " projection_ok=" << (s.projection_ok ? "yes" : "no");
  if (!s.csv_path.empty()) std::cout << " log=" << s.csv_path;
  std::cout << "\n";
}

std::string csv_name(const std::string& out_dir, const std::string& scenario,
                     const std::string& suffix) {
  fs::create_directories(out_dir);
  std::string stem = fs::path(scenario).stem().string();
  if (!suffix.empty()) stem += "-" + suffix;
  return (fs::path(out_dir) / (stem + ".csv")).string();
}

// Reconstructs the 12-dim tracking error trace from a simulation log.
std::vector<Vec12> error_trace_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open log: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty log: " + path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw ConfigError("log is missing column " + name + ": " + path);
  };
  const char* names[] = {"x", "y", "z", "roll", "pitch", "yaw",
                         "vx", "vy", "vz", "wx", "wy", "wz"};
  int idx_x[12], idx_d[12];
  for (int i = 0; i < 12; ++i) {
    idx_x[i] = col(names[i]);
    idx_d[i] = col(std::string(names[i]) + "d");
  }
  std::vector<Vec12> trace;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    Vec12 x, d;
    for (int i = 0; i < 12; ++i) {
      x[i] = std::stod(cells[idx_x[i]]);
      d[i] = std::stod(cells[idx_d[i]]);
    }
    trace.push_back(state_error(RobotState::from_vector(x),
                                RobotState::from_vector(d))
                        .as_vector());
  }
  return trace;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-rigid-body locomotion scenario simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = ".", controllers = "mpc,adaptive-mpc";
  std::string param_path, values, gains_path, log_path;
  double eps_v = -1.0;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory for the CSV log");

  auto* compare = app.add_subcommand(
      "compare", "run a scenario under several controllers");
  compare->add_option("--scenario", scenario_path)->required();
  compare->add_option("--controllers", controllers,
                      "comma-separated controller names");
  compare->add_option("--out", out_dir);

  auto* sweep = app.add_subcommand(
      "sweep", "run a scenario across values of one config entry");
  sweep->add_option("--scenario", scenario_path)->required();
  sweep->add_option("--param", param_path, "dotted config path, e.g. mpc.dt")
      ->required();
  sweep->add_option("--values", values, "comma-separated JSON values")
      ->required();
  sweep->add_option("--out", out_dir);

  auto* lyap = app.add_subcommand(
      "check-lyapunov", "certificate for a gain set, optional log decay check");
  lyap->add_option("--gains", gains_path,
                   "JSON file with kp, kd (6 each), optional q_diag (12)");
  lyap->add_option("--log", log_path, "simulation CSV to check decay on");
  lyap->add_option("--eps", eps_v, "decay slack (default: derived from trace)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ScenarioConfig cfg = ScenarioConfig::load(scenario_path);
      const RunSummary s =
          run_scenario(cfg, csv_name(out_dir, scenario_path, ""));
      print_summary("run", s);
      return status_code(s.status);
    }

    if (compare->parsed()) {
      std::stringstream ss(controllers);
      std::string name;
      int worst = 0;
      while (std::getline(ss, name, ',')) {
        ScenarioConfig cfg = ScenarioConfig::load(scenario_path);
        cfg.controller = controller_from_string(name);
        const RunSummary s =
            run_scenario(cfg, csv_name(out_dir, scenario_path, name));
        print_summary(name, s);
        worst = std::max(worst, status_code(s.status));
      }
      // falling is a reported outcome here, not a command failure
      return worst == 4 ? 4 : 0;
    }

    if (sweep->parsed()) {
      std::stringstream ss(values);
      std::string value;
      int index = 0;
      while (std::getline(ss, value, ',')) {
        const ScenarioConfig cfg =
            load_with_override(scenario_path, param_path, value);
        const RunSummary s = run_scenario(
            cfg, csv_name(out_dir, scenario_path,
                          param_path + "-" + std::to_string(index++)));
        print_summary(param_path + "=" + value, s);
      }
      return 0;
    }

    // check-lyapunov
    Vec6 kp = BalanceGains{}.kp, kd = BalanceGains{}.kd;
    Mat12 q_l = Mat12::Identity();
    if (!gains_path.empty()) {
      std::ifstream in(gains_path);
      if (!in) throw ConfigError("cannot open gains file: " + gains_path);
      json j = json::parse(in, nullptr, false);
      if (j.is_discarded()) throw ConfigError("bad gains file");
      for (int i = 0; i < 6; ++i) {
        if (j.contains("kp")) kp[i] = j["kp"][i].get<double>();
        if (j.contains("kd")) kd[i] = j["kd"][i].get<double>();
      }
      if (j.contains("q_diag"))
        for (int i = 0; i < 12; ++i)
          q_l(i, i) = j["q_diag"][i].get<double>();
    }
    const LyapunovCertificate cert = build_certificate(kp, kd, q_l);
    json report;
    report["lambda"] = cert.lambda;
    report["residual"] = cert.residual;
    if (!log_path.empty()) {
      const auto trace = error_trace_from_csv(log_path);
      const DecayReport d = check_decay(trace, {}, cert, 1e-3, eps_v,
                                        static_cast<int>(trace.size() / 10));
      report["violation_fraction"] = d.violation_fraction;
      report["violations"] = d.violations;
      report["checked"] = d.checked;
      report["eps_v"] = d.eps_v;
      report["max_excess"] = d.max_excess;
    }
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const NonHurwitz& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
