#include "armsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "armsim/kinematics.hpp"

namespace armsim {

namespace {

void require_length(const Eigen::VectorXd& v, int n, const char* name) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string("dynamics: ") + name +
                                " has wrong length");
  }
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string("dynamics: ") + name +
                                " is not finite");
  }
}

// Recursive Newton-Euler for a serial revolute chain in standard DH.
//
// All link quantities live in their own link frame. rot[i] maps frame-i
// vectors to frame i-1; joint_to_origin[i] is the vector from the origin of
// frame i-1 to the origin of frame i, expressed in frame i, which for
// standard DH is the constant (a, d sin(alpha), d cos(alpha)).
Eigen::VectorXd rne(const RobotModel& model, const Eigen::VectorXd& q,
                    const Eigen::VectorXd& qd, const Eigen::VectorXd& qdd,
                    const Eigen::Vector3d& gravity) {
  const int n = model.dof();
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();

  std::vector<Eigen::Matrix3d> rot(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector3d> joint_to_origin(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector3d> net_force(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector3d> net_moment(static_cast<std::size_t>(n));

  // Outward pass: angular velocity/acceleration and linear acceleration of
  // each link, with the base accelerating at -gravity instead of carrying
  // explicit gravity forces.
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  Eigen::Vector3d wd = Eigen::Vector3d::Zero();
  Eigen::Vector3d vd = -gravity;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const LinkParams& link = model.links[k];
    const double theta = q(i) + link.theta_offset;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double ca = std::cos(link.alpha);
    const double sa = std::sin(link.alpha);
    rot[k] << ct, -st * ca, st * sa,
              st, ct * ca, -ct * sa,
              0.0, sa, ca;
    joint_to_origin[k] = Eigen::Vector3d(link.a, link.d * sa, link.d * ca);

    const Eigen::Matrix3d to_link = rot[k].transpose();
    const Eigen::Vector3d w_parent = w;
    wd = to_link * (wd + qdd(i) * ez + qd(i) * w_parent.cross(ez));
    w = to_link * (w_parent + qd(i) * ez);
    vd = to_link * vd + wd.cross(joint_to_origin[k]) +
         w.cross(w.cross(joint_to_origin[k]));

    const Eigen::Vector3d com_accel =
        vd + wd.cross(link.com) + w.cross(w.cross(link.com));
    net_force[k] = link.mass * com_accel;
    net_moment[k] = link.inertia * wd + w.cross(link.inertia * w);
  }

  // Inward pass: propagate interaction wrenches root-ward and project the
  // couple onto each joint axis (z of the previous frame, seen in frame i).
  Eigen::VectorXd tau(n);
  Eigen::Vector3d f_next = Eigen::Vector3d::Zero();
  Eigen::Vector3d m_next = Eigen::Vector3d::Zero();
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const LinkParams& link = model.links[k];
    Eigen::Vector3d f_child = Eigen::Vector3d::Zero();
    Eigen::Vector3d m_child = Eigen::Vector3d::Zero();
    if (i + 1 < n) {
      f_child = rot[k + 1] * f_next;
      m_child = rot[k + 1] * m_next;
    }
    const Eigen::Vector3d f = f_child + net_force[k];
    const Eigen::Vector3d m = net_moment[k] + m_child +
                              (joint_to_origin[k] + link.com).cross(f) -
                              link.com.cross(f_child);
    tau(i) = m.dot(rot[k].transpose() * ez);
    f_next = f;
    m_next = m;
  }
  return tau;
}

}  // namespace

Eigen::VectorXd inverse_dynamics(
    const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
    const Eigen::VectorXd& qdd,
    const std::optional<Eigen::Vector3d>& gravity_override) {
  const int n = model.dof();
  require_length(q, n, "q");
  require_length(qd, n, "qd");
  require_length(qdd, n, "qdd");
  const Eigen::Vector3d gravity =
      gravity_override ? *gravity_override : model.gravity;
  return rne(model, q, qd, qdd, gravity);
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q) {
  const int n = model.dof();
  require_length(q, n, "q");
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);

  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    m.col(j) = rne(model, q, zero, Eigen::VectorXd::Unit(n, j),
                   Eigen::Vector3d::Zero());
  }
  const double asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10) {
    throw std::logic_error("mass_matrix: column probes are not symmetric");
  }
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd gravity_vector(const RobotModel& model,
                               const Eigen::VectorXd& q) {
  const int n = model.dof();
  require_length(q, n, "q");
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  return rne(model, q, zero, zero, model.gravity);
}

Eigen::VectorXd coriolis_vector(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qd) {
  const int n = model.dof();
  require_length(q, n, "q");
  require_length(qd, n, "qd");
  return rne(model, q, qd, Eigen::VectorXd::Zero(n), Eigen::Vector3d::Zero());
}

Eigen::MatrixXd coriolis_matrix(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qd) {
  const int n = model.dof();
  require_length(q, n, "q");
  require_length(qd, n, "qd");
  constexpr double kStep = 1e-6;

  // dM[k] = dM/dq_k by central differences.
  std::vector<Eigen::MatrixXd> dm(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd plus = q;
    Eigen::VectorXd minus = q;
    plus(k) += kStep;
    minus(k) -= kStep;
    dm[static_cast<std::size_t>(k)] =
        (mass_matrix(model, plus) - mass_matrix(model, minus)) / (2.0 * kStep);
  }

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double entry = 0.0;
      for (int k = 0; k < n; ++k) {
        // Christoffel symbols of the first kind on M(q).
        entry += 0.5 *
                 (dm[static_cast<std::size_t>(k)](i, j) +
                  dm[static_cast<std::size_t>(j)](i, k) -
                  dm[static_cast<std::size_t>(i)](j, k)) *
                 qd(k);
      }
      c(i, j) = entry;
    }
  }
  return c;
}

Eigen::VectorXd forward_dynamics(const RobotModel& model,
                                 const JointState& state,
                                 const Eigen::VectorXd& tau) {
  const int n = model.dof();
  require_length(state.q, n, "q");
  require_length(state.qd, n, "qd");
  require_length(tau, n, "tau");

  const Eigen::MatrixXd m = mass_matrix(model, state.q);
  // Velocity and gravity torques in a single sweep.
  const Eigen::VectorXd bias =
      rne(model, state.q, state.qd, Eigen::VectorXd::Zero(n), model.gravity);

  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "forward_dynamics: mass matrix factorization failed");
  }
  return llt.solve(tau - bias);
}

double total_energy(const RobotModel& model, const JointState& state) {
  const int n = model.dof();
  require_length(state.q, n, "q");
  require_length(state.qd, n, "qd");

  const Eigen::MatrixXd m = mass_matrix(model, state.q);
  const double kinetic = 0.5 * state.qd.dot(m * state.qd);

  double potential = 0.0;
  const auto frames = link_frames(model, state.q);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const Eigen::Vector3d com_world =
        frames[k].block<3, 3>(0, 0) * model.links[k].com +
        frames[k].block<3, 1>(0, 3);
    potential += model.links[k].mass * model.gravity.dot(-com_world);
  }
  return kinetic + potential;
}

}  // namespace armsim
