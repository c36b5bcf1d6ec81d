#include "armsim/robot_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace armsim {

namespace {

LinkParams slender_rod_x(double a, double density) {
  // Rod lying along -x of the link frame, from the frame origin back to the
  // previous joint.
  LinkParams link;
  link.a = a;
  link.mass = density * a;
  link.com = Eigen::Vector3d(-0.5 * a, 0.0, 0.0);
  const double transverse = link.mass * a * a / 12.0;
  link.inertia = Eigen::Vector3d(0.0, transverse, transverse).asDiagonal();
  return link;
}

}  // namespace

RobotModel default_rrr_model() {
  constexpr double kColumnHeight = 0.060 + 0.150;  // base + first segment
  constexpr double kUpperArm = 0.300;
  constexpr double kForearm = 0.200 + 0.050;  // third segment + tool offset
  constexpr double kRodDensity = 5.0;         // kg/m

  RobotModel model;
  model.name = "rrr_default";
  model.gravity = Eigen::Vector3d(0.0, 0.0, -9.81);

  LinkParams waist;
  waist.alpha = std::numbers::pi / 2.0;
  waist.d = kColumnHeight;
  waist.mass = kRodDensity * kColumnHeight;
  // The column runs along the joint axis, i.e. along the link frame's -y.
  waist.com = Eigen::Vector3d(0.0, -0.5 * kColumnHeight, 0.0);
  const double waist_transverse =
      waist.mass * kColumnHeight * kColumnHeight / 12.0;
  waist.inertia =
      Eigen::Vector3d(waist_transverse, 0.0, waist_transverse).asDiagonal();

  model.links.push_back(waist);
  model.links.push_back(slender_rod_x(kUpperArm, kRodDensity));
  model.links.push_back(slender_rod_x(kForearm, kRodDensity));
  return model;
}

std::vector<std::string> validate_model(const RobotModel& model) {
  constexpr double kTol = 1e-12;
  std::vector<std::string> violations;
  auto report = [&violations](int link_index, const std::string& what) {
    std::ostringstream msg;
    msg << "link " << link_index << ": " << what;
    violations.push_back(msg.str());
  };

  if (model.links.empty()) {
    violations.push_back("model has no links (n >= 1 required)");
    return violations;
  }
  if (!model.gravity.allFinite()) {
    violations.push_back("gravity is not finite");
  }

  for (int i = 0; i < model.dof(); ++i) {
    const LinkParams& link = model.links[static_cast<std::size_t>(i)];
    const int num = i + 1;

    if (!std::isfinite(link.a) || !std::isfinite(link.alpha) ||
        !std::isfinite(link.d) || !std::isfinite(link.theta_offset) ||
        !std::isfinite(link.mass) || !link.com.allFinite() ||
        !link.inertia.allFinite()) {
      report(num, "non-finite parameter");
      continue;
    }
    if (!(link.mass > 0.0)) {
      std::ostringstream what;
      what << "mass > 0 violated (mass = " << link.mass << ")";
      report(num, what.str());
    }

    const double asymmetry =
        (link.inertia - link.inertia.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > kTol) {
      report(num, "inertia is not symmetric");
      continue;  // principal moments are meaningless for asymmetric input
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(link.inertia);
    const Eigen::Vector3d moments = eig.eigenvalues();  // ascending
    if (moments(0) < -kTol) {
      report(num, "inertia is not positive semidefinite");
    }
    if (moments(0) + moments(1) < moments(2) - kTol) {
      std::ostringstream what;
      what << "principal moments violate the triangle inequality (" << moments(0)
           << " + " << moments(1) << " < " << moments(2) << ")";
      report(num, what.str());
    }
  }
  return violations;
}

}  // namespace armsim
