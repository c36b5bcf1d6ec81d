#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "armsim/robot_model.hpp"

namespace armsim {

// End-effector frame relative to the base: rotation columns are the
// end-effector axes in base coordinates, orthonormal with det +1.
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

enum class IkBranch { Up, Down };  // Up picks theta3 <= 0

struct IkSolution {
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  // True when the target sat on the first joint axis and theta1 was pinned
  // to zero instead of failing.
  bool singular_handled = false;
};

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Homogeneous transform of one standard-DH link at joint angle q:
// Rz(q + theta_offset) Tz(d) Tx(a) Rx(alpha).
Eigen::Matrix4d dh_transform(const LinkParams& link, double q);

// Cumulative transforms base->frame i for i = 1..n.
std::vector<Eigen::Matrix4d> link_frames(const RobotModel& model,
                                         const Eigen::VectorXd& q);

Pose forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q);

// Position-only geometric inverse kinematics for the default 3R topology:
// theta1 = atan2(y, x), theta2/theta3 from the planar two-link cosine law on
// (r, z - d1). Targets outside the reachable annulus throw UnreachableError;
// targets on the waist axis resolve with theta1 = 0 and the singular flag
// set. All angles are wrapped to (-pi, pi].
IkSolution inverse_kinematics(const RobotModel& model,
                              const Eigen::Vector3d& target, IkBranch branch);

// 6 x n geometric Jacobian; rows 0-2 map joint rates to end-effector linear
// velocity, rows 3-5 to angular velocity, both in the base frame.
Eigen::MatrixXd geometric_jacobian(const RobotModel& model,
                                   const Eigen::VectorXd& q);

// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

}  // namespace armsim
