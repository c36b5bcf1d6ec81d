#pragma once

#include <Eigen/Dense>

#include "armsim/dynamics.hpp"
#include "armsim/robot_model.hpp"
#include "armsim/trajectory.hpp"

namespace armsim {

// Diagonal PD gains for the outer loop of the computed-torque law. Strictly
// positive entries are enforced at construction.
class ControllerGains {
 public:
  ControllerGains(Eigen::VectorXd kp, Eigen::VectorXd kv);

  // kp = 100, kv = 20 on every joint: a double pole at -10 rad/s
  // (critically damped, kv^2 = 4 kp).
  static ControllerGains critically_damped(int dof, double kp = 100.0,
                                           double kv = 20.0);

  const Eigen::VectorXd& kp() const { return kp_; }
  const Eigen::VectorXd& kv() const { return kv_; }
  int dof() const { return static_cast<int>(kp_.size()); }

 private:
  Eigen::VectorXd kp_;
  Eigen::VectorXd kv_;
};

// Computed-torque control law:
//   tau = M(q) (qdd_d + Kv (qd_d - qd) + Kp (q_d - q)) + C(q, qd) + G(q).
// With an exact model the closed loop reduces to decoupled per-joint error
// dynamics e'' + Kv e' + Kp e = 0.
Eigen::VectorXd computed_torque(const RobotModel& model,
                                const JointState& state,
                                const TrajectorySample& desired,
                                const ControllerGains& gains);

// Plant variant carrying an extra point mass rigidly attached at the tool
// point (the last link's frame origin). Mass, COM and inertia of the last
// link are recombined about the composite COM. Feeding this plant to a
// controller that keeps the nominal model reproduces the tracking
// degradation of an unmodeled payload.
RobotModel apply_model_mismatch(const RobotModel& plant, double payload_mass);

}  // namespace armsim
