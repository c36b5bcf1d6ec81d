#include "armsim/controller.hpp"

#include <stdexcept>

namespace armsim {

ControllerGains::ControllerGains(Eigen::VectorXd kp, Eigen::VectorXd kv)
    : kp_(std::move(kp)), kv_(std::move(kv)) {
  if (kp_.size() != kv_.size() || kp_.size() == 0) {
    throw std::invalid_argument("ControllerGains: kp/kv length mismatch");
  }
  if ((kp_.array() <= 0.0).any() || (kv_.array() <= 0.0).any()) {
    throw std::invalid_argument("ControllerGains: gains must be > 0");
  }
  if (!kp_.allFinite() || !kv_.allFinite()) {
    throw std::invalid_argument("ControllerGains: gains must be finite");
  }
}

ControllerGains ControllerGains::critically_damped(int dof, double kp,
                                                   double kv) {
  return ControllerGains(Eigen::VectorXd::Constant(dof, kp),
                         Eigen::VectorXd::Constant(dof, kv));
}

Eigen::VectorXd computed_torque(const RobotModel& model,
                                const JointState& state,
                                const TrajectorySample& desired,
                                const ControllerGains& gains) {
  const int n = model.dof();
  if (state.q.size() != n || state.qd.size() != n || desired.q.size() != n ||
      desired.qd.size() != n || desired.qdd.size() != n || gains.dof() != n) {
    throw std::invalid_argument("computed_torque: dimension mismatch");
  }

  const Eigen::VectorXd command =
      desired.qdd + gains.kv().cwiseProduct(desired.qd - state.qd) +
      gains.kp().cwiseProduct(desired.q - state.q);
  return mass_matrix(model, state.q) * command +
         coriolis_vector(model, state.q, state.qd) +
         gravity_vector(model, state.q);
}

RobotModel apply_model_mismatch(const RobotModel& plant, double payload_mass) {
  if (payload_mass < 0.0) {
    throw std::invalid_argument("apply_model_mismatch: negative payload");
  }
  RobotModel loaded = plant;
  if (payload_mass == 0.0 || plant.links.empty()) {
    return loaded;
  }

  LinkParams& link = loaded.links.back();
  const double combined_mass = link.mass + payload_mass;
  // Payload sits at the link frame origin (the tool point).
  const Eigen::Vector3d combined_com = link.mass * link.com / combined_mass;

  auto parallel_axis = [](double mass, const Eigen::Vector3d& offset) {
    return mass * (offset.squaredNorm() * Eigen::Matrix3d::Identity() -
                   offset * offset.transpose());
  };
  link.inertia = link.inertia + parallel_axis(link.mass, link.com - combined_com) +
                 parallel_axis(payload_mass, -combined_com);
  link.mass = combined_mass;
  link.com = combined_com;
  return loaded;
}

}  // namespace armsim
