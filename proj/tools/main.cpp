#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "armsim/checks.hpp"
#include "armsim/kinematics.hpp"
#include "armsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

Eigen::VectorXd parse_csv_numbers(const std::string& text, int expected,
                                  const std::string& flag) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw armsim::ScenarioError(flag + ": '" + field + "' is not a number");
    }
  }
  if (static_cast<int>(values.size()) != expected) {
    throw armsim::ScenarioError(flag + ": expected " +
                                std::to_string(expected) + " values");
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

armsim::ScenarioConfig scenario_from(const std::optional<std::string>& path) {
  return path ? armsim::load_scenario(*path) : armsim::default_scenario();
}

// Reference-trajectory samples: t plus desired position/velocity/
// acceleration per joint.
void write_plan_csv(const armsim::ScenarioConfig& cfg, std::ostream& out) {
  const armsim::QuinticTrajectory traj = armsim::make_trajectory(cfg);
  const int n = traj.dof();
  out << "t";
  for (const char* group : {"q_ref", "qd_ref", "qdd_ref"}) {
    for (int j = 1; j <= n; ++j) {
      out << "," << group << j;
    }
  }
  out << "\n";
  const long steps =
      static_cast<long>(std::floor(cfg.sim.duration / cfg.sim.dt + 1e-9));
  char buffer[40];
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.sim.dt;
    const armsim::TrajectorySample s = traj.sample(t);
    std::snprintf(buffer, sizeof(buffer), "%.16e", t);
    out << buffer;
    for (const Eigen::VectorXd* v : {&s.q, &s.qd, &s.qdd}) {
      for (Eigen::Index j = 0; j < v->size(); ++j) {
        std::snprintf(buffer, sizeof(buffer), ",%.16e", (*v)(j));
        out << buffer;
      }
    }
    out << "\n";
  }
}

// Torque along the reference trajectory from the nominal model (open-loop
// inverse dynamics).
void write_id_csv(const armsim::ScenarioConfig& cfg, std::ostream& out) {
  const armsim::QuinticTrajectory traj = armsim::make_trajectory(cfg);
  const int n = traj.dof();
  out << "t";
  for (int j = 1; j <= n; ++j) {
    out << ",tau" << j;
  }
  out << "\n";
  const long steps =
      static_cast<long>(std::floor(cfg.sim.duration / cfg.sim.dt + 1e-9));
  char buffer[40];
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.sim.dt;
    const armsim::TrajectorySample s = traj.sample(t);
    const Eigen::VectorXd tau =
        armsim::inverse_dynamics(cfg.model, s.q, s.qd, s.qdd);
    std::snprintf(buffer, sizeof(buffer), "%.16e", t);
    out << buffer;
    for (Eigen::Index j = 0; j < tau.size(); ++j) {
      std::snprintf(buffer, sizeof(buffer), ",%.16e", tau(j));
      out << buffer;
    }
    out << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw armsim::ScenarioError("cannot write '" + path + "'");
  }
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial-arm dynamics and computed-torque control simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::string out_path;

  auto* simulate = app.add_subcommand(
      "simulate", "Run the closed-loop scenario and write the log CSV");
  simulate->add_option("--config", config_path, "Scenario JSON path");
  simulate->add_option("--out", out_path, "Output CSV path")->required();

  auto* plan = app.add_subcommand(
      "plan", "Sample the reference trajectory and write it as CSV");
  plan->add_option("--config", config_path, "Scenario JSON path");
  plan->add_option("--out", out_path, "Output CSV path")->required();

  auto* id = app.add_subcommand(
      "id", "Inverse-dynamics torque along the reference trajectory");
  id->add_option("--config", config_path, "Scenario JSON path");
  id->add_option("--out", out_path, "Output CSV path")->required();

  std::string q_text;
  auto* fk = app.add_subcommand("fk", "Forward kinematics of the default arm");
  fk->add_option("--q", q_text, "Joint angles [rad], comma separated")
      ->required();

  std::string target_text;
  std::string branch_text = "up";
  auto* ik = app.add_subcommand("ik", "Inverse kinematics of the default arm");
  ik->add_option("--target", target_text, "Target position x,y,z [m]")
      ->required();
  ik->add_option("--branch", branch_text, "Elbow branch: up or down")
      ->check(CLI::IsMember({"up", "down"}));

  auto* checks =
      app.add_subcommand("checks", "Run the full invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const armsim::ScenarioConfig cfg = scenario_from(config_path);
      armsim::write_log_csv(armsim::simulate_scenario(cfg), out_path);
      return kExitOk;
    }
    if (plan->parsed()) {
      std::ostringstream csv;
      write_plan_csv(scenario_from(config_path), csv);
      write_text_file(out_path, csv.str());
      return kExitOk;
    }
    if (id->parsed()) {
      std::ostringstream csv;
      write_id_csv(scenario_from(config_path), csv);
      write_text_file(out_path, csv.str());
      return kExitOk;
    }
    if (fk->parsed()) {
      const armsim::RobotModel model = armsim::default_rrr_model();
      const Eigen::VectorXd q = parse_csv_numbers(q_text, model.dof(), "--q");
      const armsim::Pose pose = armsim::forward_kinematics(model, q);
      std::printf("%.6f %.6f %.6f\n", pose.position.x(), pose.position.y(),
                  pose.position.z());
      return kExitOk;
    }
    if (ik->parsed()) {
      const armsim::RobotModel model = armsim::default_rrr_model();
      const Eigen::VectorXd target = parse_csv_numbers(target_text, 3, "--target");
      const armsim::IkBranch branch =
          branch_text == "up" ? armsim::IkBranch::Up : armsim::IkBranch::Down;
      const armsim::IkSolution solution = armsim::inverse_kinematics(
          model, Eigen::Vector3d(target), branch);
      if (solution.singular_handled) {
        std::cerr << "note: target on the waist axis, theta1 set to 0\n";
      }
      std::printf("%.6f %.6f %.6f\n", solution.q(0), solution.q(1),
                  solution.q(2));
      return kExitOk;
    }
    if (checks->parsed()) {
      return armsim::run_checks(std::cout) ? kExitOk : kExitValidation;
    }
  } catch (const armsim::UnreachableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const armsim::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const armsim::SimulationBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
