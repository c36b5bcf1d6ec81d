#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace armsim {

// Reference setpoint at one instant: desired position, velocity and
// acceleration for every joint.
struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
  Eigen::VectorXd qdd;
};

// Per-joint quintic from start to end over [0, T] with zero boundary
// velocity and acceleration, i.e. the normalized profile
// s(u) = 10 u^3 - 15 u^4 + 6 u^5 scaled by each joint's travel. Sampling
// outside [0, T] clamps to the nearest endpoint (hold), so runs may extend
// past T to observe settling.
class QuinticTrajectory {
 public:
  static QuinticTrajectory plan(const Eigen::VectorXd& start_q,
                                const Eigen::VectorXd& end_q, double duration);

  TrajectorySample sample(double t) const;

  const Eigen::VectorXd& start_q() const { return start_q_; }
  const Eigen::VectorXd& end_q() const { return end_q_; }
  double duration() const { return duration_; }
  int dof() const { return static_cast<int>(coefficients_.size()); }

  // Coefficients of joint j's polynomial in the normalized time u = t/T,
  // constant term first.
  const std::array<double, 6>& coefficients(int joint) const {
    return coefficients_[static_cast<std::size_t>(joint)];
  }

 private:
  QuinticTrajectory() = default;

  Eigen::VectorXd start_q_;
  Eigen::VectorXd end_q_;
  double duration_ = 0.0;
  std::vector<std::array<double, 6>> coefficients_;
};

}  // namespace armsim
