#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace armsim {

// One link of a serial chain in standard (distal) Denavit-Hartenberg
// convention. The link frame is the DH frame at the link's far end; com is
// expressed in that frame and inertia is taken about the center of mass.
struct LinkParams {
  double a = 0.0;             // link length [m]
  double alpha = 0.0;         // link twist [rad]
  double d = 0.0;             // link offset [m]
  double theta_offset = 0.0;  // added to the joint variable [rad]
  double mass = 0.0;          // [kg]
  Eigen::Vector3d com = Eigen::Vector3d::Zero();      // [m], link frame
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // [kg m^2], about com
};

// Serial revolute chain plus the gravity field it lives in. Immutable by
// convention once built; everything downstream takes it by const reference.
struct RobotModel {
  std::string name;
  std::vector<LinkParams> links;
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};  // base frame [m/s^2]

  int dof() const { return static_cast<int>(links.size()); }
};

// The default three-revolute arm (waist, shoulder, elbow).
//
// DH table: joint 1 (a=0, alpha=+pi/2, d=0.210), joint 2 (a=0.300),
// joint 3 (a=0.250). The 0.210 m column merges the 0.060 m base with the
// 0.150 m first segment (no joint between them); the 0.250 m forearm folds
// a 0.050 m rigid tool offset into the 0.200 m third segment.
//
// Inertial data models each moving link as a uniform slender rod of
// 5.0 kg/m along its own length, COM at mid-length, (1/12) m L^2 about the
// transverse axes and zero about the rod axis. Link 1's rod runs along its
// joint axis, which the alpha=+pi/2 twist maps to the link frame's +y.
RobotModel default_rrr_model();

// Checks every model invariant: positive masses, symmetric positive
// semidefinite inertias, principal moments satisfying the triangle
// inequality, finite fields, at least one link. Returns one message per
// violation (links numbered from 1); empty means the model is sound.
std::vector<std::string> validate_model(const RobotModel& model);

}  // namespace armsim
