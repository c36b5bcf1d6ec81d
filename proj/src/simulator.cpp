#include "armsim/simulator.hpp"

#include <cmath>
#include <sstream>

namespace armsim {

namespace {

bool finite(const JointState& state) {
  return state.q.allFinite() && state.qd.allFinite();
}

// RK4 where the acceleration may depend on the stage time (continuous
// control). accel(t, state) must be side-effect free.
template <typename Accel>
JointState rk4_step(const JointState& state, double t0, double dt,
                    Accel&& accel) {
  const Eigen::VectorXd k1q = state.qd;
  const Eigen::VectorXd k1v = accel(t0, state);

  JointState mid1{state.q + 0.5 * dt * k1q, state.qd + 0.5 * dt * k1v};
  const Eigen::VectorXd k2q = mid1.qd;
  const Eigen::VectorXd k2v = accel(t0 + 0.5 * dt, mid1);

  JointState mid2{state.q + 0.5 * dt * k2q, state.qd + 0.5 * dt * k2v};
  const Eigen::VectorXd k3q = mid2.qd;
  const Eigen::VectorXd k3v = accel(t0 + 0.5 * dt, mid2);

  JointState end{state.q + dt * k3q, state.qd + dt * k3v};
  const Eigen::VectorXd k4q = end.qd;
  const Eigen::VectorXd k4v = accel(t0 + dt, end);

  JointState next;
  next.q = state.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  next.qd = state.qd + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return next;
}

}  // namespace

SimulationBlowup::SimulationBlowup(double time)
    : std::runtime_error([time] {
        std::ostringstream msg;
        msg << "simulation produced a non-finite state at t = " << time << " s";
        return msg.str();
      }()),
      time_(time) {}

JointState step_rk4(const RobotModel& model, const JointState& state,
                    const Eigen::VectorXd& tau, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_rk4: dt must be positive");
  }
  JointState next = rk4_step(state, 0.0, dt,
                             [&](double, const JointState& s) {
                               return forward_dynamics(model, s, tau);
                             });
  if (!finite(next)) {
    throw SimulationBlowup(dt);
  }
  return next;
}

void validate_config(const SimConfig& cfg, int dof) {
  if (!(cfg.dt > 0.0)) {
    throw std::invalid_argument("sim config: dt must be positive");
  }
  if (!(cfg.duration >= cfg.dt)) {
    throw std::invalid_argument("sim config: duration must be at least dt");
  }
  if (cfg.control_period < cfg.dt) {
    throw std::invalid_argument("sim config: control_period must be >= dt");
  }
  const double ratio = cfg.control_period / cfg.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-12) {
    throw std::invalid_argument(
        "sim config: control_period must be an integer multiple of dt");
  }
  if (cfg.initial_state.q.size() != dof || cfg.initial_state.qd.size() != dof) {
    throw std::invalid_argument("sim config: initial state has wrong length");
  }
}

SimLog run_simulation(const RobotModel& plant,
                      const RobotModel& controller_model,
                      const QuinticTrajectory& trajectory,
                      const ControllerGains& gains, const SimConfig& cfg) {
  const int n = plant.dof();
  if (controller_model.dof() != n || trajectory.dof() != n ||
      gains.dof() != n) {
    throw std::invalid_argument("run_simulation: dimension mismatch");
  }
  validate_config(cfg, n);

  const long steps = static_cast<long>(std::floor(cfg.duration / cfg.dt + 1e-9));
  const long control_every =
      static_cast<long>(std::llround(cfg.control_period / cfg.dt));
  const bool continuous_control = control_every == 1;

  SimLog log;
  log.dof = n;
  const std::size_t rows = static_cast<std::size_t>(steps) + 1;
  log.t.reserve(rows);
  log.q.reserve(rows);
  log.qd.reserve(rows);
  log.qdd.reserve(rows);
  log.tau.reserve(rows);
  log.q_ref.reserve(rows);
  log.qd_ref.reserve(rows);
  log.qdd_ref.reserve(rows);
  log.error.reserve(rows);
  log.energy.reserve(rows);

  auto control = [&](double t, const JointState& s) {
    return computed_torque(controller_model, s, trajectory.sample(t), gains);
  };

  JointState state = cfg.initial_state;
  Eigen::VectorXd held_tau = Eigen::VectorXd::Zero(n);
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (!finite(state)) {
      throw SimulationBlowup(t);
    }
    const TrajectorySample desired = trajectory.sample(t);
    if (k % control_every == 0) {
      held_tau = control(t, state);
    }

    log.t.push_back(t);
    log.q.push_back(state.q);
    log.qd.push_back(state.qd);
    log.qdd.push_back(forward_dynamics(plant, state, held_tau));
    log.tau.push_back(held_tau);
    log.q_ref.push_back(desired.q);
    log.qd_ref.push_back(desired.qd);
    log.qdd_ref.push_back(desired.qdd);
    log.error.push_back(desired.q - state.q);
    log.energy.push_back(total_energy(plant, state));

    if (k == steps) {
      break;
    }
    if (continuous_control) {
      state = rk4_step(state, t, cfg.dt, [&](double ts, const JointState& s) {
        return forward_dynamics(plant, s, control(ts, s));
      });
    } else {
      state = rk4_step(state, t, cfg.dt, [&](double, const JointState& s) {
        return forward_dynamics(plant, s, held_tau);
      });
    }
  }
  return log;
}

}  // namespace armsim
