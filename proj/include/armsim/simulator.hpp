#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "armsim/controller.hpp"
#include "armsim/dynamics.hpp"
#include "armsim/robot_model.hpp"
#include "armsim/trajectory.hpp"

namespace armsim {

// Fixed-step integration settings. control_period must be a whole multiple
// of dt; at control_period == dt the control law is treated as continuous
// (re-evaluated inside integrator stages), while larger periods hold the
// torque between control instants (zero-order hold of a discrete loop).
struct SimConfig {
  double dt = 1e-3;              // [s]
  double duration = 3.0;         // [s]
  double control_period = 1e-3;  // [s]
  JointState initial_state;
};

// Uniformly sampled closed-loop traces: one entry per log instant
// t_k = k dt, k = 0..floor(duration/dt). Accelerations come from the
// plant's forward dynamics at the logged state, energy from total_energy.
struct SimLog {
  int dof = 0;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> qd;
  std::vector<Eigen::VectorXd> qdd;
  std::vector<Eigen::VectorXd> tau;
  std::vector<Eigen::VectorXd> q_ref;
  std::vector<Eigen::VectorXd> qd_ref;
  std::vector<Eigen::VectorXd> qdd_ref;
  std::vector<Eigen::VectorXd> error;  // q_ref - q
  std::vector<double> energy;

  std::size_t rows() const { return t.size(); }
};

// Raised when integration produces a non-finite state; time() is the first
// offending instant.
class SimulationBlowup : public std::runtime_error {
 public:
  explicit SimulationBlowup(double time);
  double time() const { return time_; }

 private:
  double time_;
};

// One classical fourth-order Runge-Kutta step of
// (q, qd)' = (qd, forward_dynamics(q, qd, tau)) with tau held constant over
// the step.
JointState step_rk4(const RobotModel& model, const JointState& state,
                    const Eigen::VectorXd& tau, double dt);

void validate_config(const SimConfig& cfg, int dof);

// Closed-loop run: the computed-torque controller (using controller_model)
// drives the plant along the reference trajectory. Separate plant and
// controller models expose the effect of model mismatch; pass the same
// model twice for the matched case.
SimLog run_simulation(const RobotModel& plant,
                      const RobotModel& controller_model,
                      const QuinticTrajectory& trajectory,
                      const ControllerGains& gains, const SimConfig& cfg);

}  // namespace armsim
