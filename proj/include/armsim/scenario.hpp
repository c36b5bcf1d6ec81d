#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "armsim/controller.hpp"
#include "armsim/robot_model.hpp"
#include "armsim/simulator.hpp"
#include "armsim/trajectory.hpp"

namespace armsim {

// Configuration or file-format problem; the message names the offending
// field. The CLI maps this to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One self-contained experiment: robot, reference motion, gains, solver
// settings and optional unmodeled payload. Loaded from JSON (schema_version
// 1); unknown fields are rejected and omitted optional sections fall back
// to documented defaults. Lengths may be given in mm via "units"; the
// stored model is always SI.
struct ScenarioConfig {
  int schema_version = 1;
  bool uses_default_model = true;  // "model": "default_rrr"
  RobotModel model = default_rrr_model();

  std::string trajectory_type = "quintic";
  Eigen::VectorXd start_q;
  Eigen::VectorXd end_q;
  double trajectory_duration = 2.0;

  ControllerGains gains = ControllerGains::critically_damped(3);
  SimConfig sim;
  double payload_mass = 0.0;
};

// The built-in scenario: default arm, rest-to-rest quintic
// (0, 0, 0) -> (pi/2, pi/4, -pi/3) over 2 s, kp = 100 / kv = 20,
// dt = 1 ms for 3 s, start on the trajectory, no payload.
ScenarioConfig default_scenario();

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& cfg);
void write_scenario(const ScenarioConfig& cfg, const std::string& path);

// Derived pieces of the pipeline.
QuinticTrajectory make_trajectory(const ScenarioConfig& cfg);
RobotModel plant_model(const ScenarioConfig& cfg);  // payload applied

// Full closed-loop run of the scenario (controller keeps the nominal
// model; the plant carries the payload).
SimLog simulate_scenario(const ScenarioConfig& cfg);

// CSV with header t, q1..qn, qd1..qdn, qdd1..qddn, tau1..taun,
// q_ref1..q_refn, qd_ref1..qd_refn, qdd_ref1..qdd_refn, e1..en, energy
// (2 + 8n columns) and every value in full-precision scientific notation,
// so written logs re-parse bit exactly.
void write_log_csv(const SimLog& log, std::ostream& out);
void write_log_csv(const SimLog& log, const std::string& path);
std::string log_to_csv(const SimLog& log);
SimLog read_log_csv(std::istream& in);

}  // namespace armsim
