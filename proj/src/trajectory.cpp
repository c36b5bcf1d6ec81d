#include "armsim/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace armsim {

QuinticTrajectory QuinticTrajectory::plan(const Eigen::VectorXd& start_q,
                                          const Eigen::VectorXd& end_q,
                                          double duration) {
  if (start_q.size() != end_q.size()) {
    throw std::invalid_argument("plan: start and end lengths differ");
  }
  if (!(duration > 0.0)) {
    throw std::invalid_argument("plan: duration must be positive");
  }
  if (!start_q.allFinite() || !end_q.allFinite()) {
    throw std::invalid_argument("plan: non-finite joint values");
  }

  QuinticTrajectory traj;
  traj.start_q_ = start_q;
  traj.end_q_ = end_q;
  traj.duration_ = duration;
  traj.coefficients_.resize(static_cast<std::size_t>(start_q.size()));
  for (Eigen::Index j = 0; j < start_q.size(); ++j) {
    const double travel = end_q(j) - start_q(j);
    traj.coefficients_[static_cast<std::size_t>(j)] = {
        start_q(j), 0.0, 0.0, 10.0 * travel, -15.0 * travel, 6.0 * travel};
  }
  return traj;
}

TrajectorySample QuinticTrajectory::sample(double t) const {
  const double clamped = std::clamp(t, 0.0, duration_);
  const double u = clamped / duration_;

  TrajectorySample out;
  out.t = t;
  const Eigen::Index n = start_q_.size();
  out.q.resize(n);
  out.qd.resize(n);
  out.qdd.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& c = coefficients_[static_cast<std::size_t>(j)];
    // Horner evaluation of the polynomial and its u-derivatives.
    double value = c[5];
    double deriv = 5.0 * c[5];
    double curve = 20.0 * c[5];
    for (int k = 4; k >= 1; --k) {
      const double ck = c[static_cast<std::size_t>(k)];
      value = value * u + ck;
      deriv = deriv * u + static_cast<double>(k) * ck;
      if (k >= 2) {
        curve = curve * u + static_cast<double>(k * (k - 1)) * ck;
      }
    }
    value = value * u + c[0];
    out.q(j) = value;
    out.qd(j) = deriv / duration_;
    out.qdd(j) = curve / duration_ / duration_;
  }
  return out;
}

}  // namespace armsim
