#include "armsim/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace armsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(const RobotModel& model, const Eigen::VectorXd& q,
                       const char* where) {
  if (q.size() != model.dof()) {
    throw std::invalid_argument(std::string(where) +
                                ": joint vector length does not match model");
  }
}

}  // namespace

double wrap_angle(double angle) {
  double wrapped = std::fmod(angle + kPi, 2.0 * kPi);
  if (wrapped <= 0.0) {
    wrapped += 2.0 * kPi;
  }
  return wrapped - kPi;
}

Eigen::Matrix4d dh_transform(const LinkParams& link, double q) {
  const double theta = q + link.theta_offset;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double ca = std::cos(link.alpha);
  const double sa = std::sin(link.alpha);

  Eigen::Matrix4d t;
  t << ct, -st * ca, st * sa, link.a * ct,
       st, ct * ca, -ct * sa, link.a * st,
       0.0, sa, ca, link.d,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

std::vector<Eigen::Matrix4d> link_frames(const RobotModel& model,
                                         const Eigen::VectorXd& q) {
  require_dimension(model, q, "link_frames");
  std::vector<Eigen::Matrix4d> frames;
  frames.reserve(model.links.size());
  Eigen::Matrix4d accumulated = Eigen::Matrix4d::Identity();
  for (int i = 0; i < model.dof(); ++i) {
    accumulated = accumulated *
                  dh_transform(model.links[static_cast<std::size_t>(i)], q(i));
    frames.push_back(accumulated);
  }
  return frames;
}

Pose forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q) {
  const auto frames = link_frames(model, q);
  Pose pose;
  pose.position = frames.back().block<3, 1>(0, 3);
  pose.rotation = frames.back().block<3, 3>(0, 0);
  return pose;
}

IkSolution inverse_kinematics(const RobotModel& model,
                              const Eigen::Vector3d& target, IkBranch branch) {
  if (model.dof() != 3) {
    throw std::invalid_argument("inverse_kinematics: model must have 3 joints");
  }
  const LinkParams& l1 = model.links[0];
  const LinkParams& l2 = model.links[1];
  const LinkParams& l3 = model.links[2];
  const bool rrr_pattern =
      std::abs(l1.a) < 1e-12 && std::abs(l1.alpha - kPi / 2.0) < 1e-9 &&
      std::abs(l2.alpha) < 1e-12 && std::abs(l3.alpha) < 1e-12 &&
      std::abs(l2.d) < 1e-12 && std::abs(l3.d) < 1e-12 &&
      std::abs(l1.theta_offset) < 1e-12 && std::abs(l2.theta_offset) < 1e-12 &&
      std::abs(l3.theta_offset) < 1e-12;
  if (!rrr_pattern) {
    throw std::invalid_argument(
        "inverse_kinematics: model does not match the waist-shoulder-elbow "
        "DH pattern");
  }

  const double d1 = l1.d;
  const double a2 = l2.a;
  const double a3 = l3.a;

  const double r = std::hypot(target.x(), target.y());
  const double s = target.z() - d1;
  const double radial = std::hypot(r, s);

  constexpr double kReachTol = 1e-9;
  if (radial > a2 + a3 + kReachTol || radial < std::abs(a2 - a3) - kReachTol) {
    throw UnreachableError("inverse_kinematics: target unreachable (distance " +
                           std::to_string(radial) + " m from the shoulder)");
  }

  IkSolution solution;
  solution.singular_handled = r < 1e-12;
  const double theta1 =
      solution.singular_handled ? 0.0 : std::atan2(target.y(), target.x());

  double cos3 = (radial * radial - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
  cos3 = std::clamp(cos3, -1.0, 1.0);
  const double theta3 =
      branch == IkBranch::Up ? -std::acos(cos3) : std::acos(cos3);
  const double theta2 = std::atan2(s, r) - std::atan2(a3 * std::sin(theta3),
                                                      a2 + a3 * std::cos(theta3));

  solution.q = Eigen::Vector3d(wrap_angle(theta1), wrap_angle(theta2),
                               wrap_angle(theta3));
  return solution;
}

Eigen::MatrixXd geometric_jacobian(const RobotModel& model,
                                   const Eigen::VectorXd& q) {
  require_dimension(model, q, "geometric_jacobian");
  const auto frames = link_frames(model, q);
  const Eigen::Vector3d effector = frames.back().block<3, 1>(0, 3);

  Eigen::MatrixXd jacobian(6, model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d origin = Eigen::Vector3d::Zero();
    if (i > 0) {
      axis = frames[static_cast<std::size_t>(i - 1)].block<3, 1>(0, 2);
      origin = frames[static_cast<std::size_t>(i - 1)].block<3, 1>(0, 3);
    }
    jacobian.block<3, 1>(0, i) = axis.cross(effector - origin);
    jacobian.block<3, 1>(3, i) = axis;
  }
  return jacobian;
}

}  // namespace armsim
