#pragma once

#include <optional>

#include <Eigen/Dense>

#include "armsim/robot_model.hpp"

namespace armsim {

// Joint positions and velocities at one instant.
struct JointState {
  Eigen::VectorXd q;   // [rad]
  Eigen::VectorXd qd;  // [rad/s]
};

// Joint torques required to produce qdd at (q, qd), by recursive
// Newton-Euler: outward velocity/acceleration recursion, inward force/torque
// recursion. Gravity enters as a fictitious base acceleration of -gravity;
// pass a zero override to switch it off.
Eigen::VectorXd inverse_dynamics(
    const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
    const Eigen::VectorXd& qdd,
    const std::optional<Eigen::Vector3d>& gravity_override = std::nullopt);

// Joint-space inertia matrix, built one column at a time as
// inverse_dynamics(q, 0, e_j, gravity=0) and symmetrized. Symmetric positive
// definite for any valid model away from degenerate configurations.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q);

// Generalized gravity torques G(q).
Eigen::VectorXd gravity_vector(const RobotModel& model,
                               const Eigen::VectorXd& q);

// Combined Coriolis/centripetal torque vector, quadratic in qd. Together
// with the other terms it completes tau = M(q) qdd + C(q, qd) + G(q).
Eigen::VectorXd coriolis_vector(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qd);

// Matrix form of the velocity terms from Christoffel symbols of the first
// kind, using central differences of the mass matrix (step 1e-6). Satisfies
// C(q, qd) qd = coriolis_vector(q, qd) and the Mdot - 2C skew-symmetry
// property up to the differencing error.
Eigen::MatrixXd coriolis_matrix(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qd);

// Joint accelerations under applied torque: solves
// M(q) qdd = tau - C(q, qd) - G(q) with a Cholesky factorization. Throws
// std::runtime_error if the factorization fails (invariant-violating model
// or a degenerate configuration).
Eigen::VectorXd forward_dynamics(const RobotModel& model,
                                 const JointState& state,
                                 const Eigen::VectorXd& tau);

// Kinetic plus potential energy, potential referenced to the base origin:
// T = qd' M(q) qd / 2, V = sum_i m_i g . (-p_com,i).
double total_energy(const RobotModel& model, const JointState& state);

}  // namespace armsim
