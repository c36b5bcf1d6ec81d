#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "armsim/trajectory.hpp"

using namespace armsim;

namespace {

QuinticTrajectory example() {
  Eigen::Vector3d start(0.0, -0.5, 1.0);
  Eigen::Vector3d end(1.5, 0.5, -1.0);
  return QuinticTrajectory::plan(start, end, 2.0);
}

}  // namespace

TEST_CASE("boundary conditions are exact") {
  const QuinticTrajectory traj = example();

  const TrajectorySample at_start = traj.sample(0.0);
  CHECK((at_start.q - traj.start_q()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(at_start.qd.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(at_start.qdd.cwiseAbs().maxCoeff() < 1e-12);

  const TrajectorySample at_end = traj.sample(traj.duration());
  CHECK((at_end.q - traj.end_q()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(at_end.qd.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(at_end.qdd.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("midpoint halves the travel") {
  const QuinticTrajectory traj = example();
  const TrajectorySample mid = traj.sample(traj.duration() / 2.0);
  const Eigen::VectorXd expected = 0.5 * (traj.start_q() + traj.end_q());
  CHECK((mid.q - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sampling clamps and holds outside the horizon") {
  const QuinticTrajectory traj = example();

  const TrajectorySample before = traj.sample(-1.0);
  CHECK((before.q - traj.start_q()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(before.qd.cwiseAbs().maxCoeff() < 1e-12);

  const TrajectorySample after = traj.sample(traj.duration() + 10.0);
  CHECK((after.q - traj.end_q()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(after.qd.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(after.qdd.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sampled derivatives match finite differences of position") {
  const QuinticTrajectory traj = example();
  constexpr double kStep = 1e-6;
  for (int i = 1; i <= 100; ++i) {
    const double t = traj.duration() * i / 101.0;
    const TrajectorySample s = traj.sample(t);
    const Eigen::VectorXd fd_vel =
        (traj.sample(t + kStep).q - traj.sample(t - kStep).q) / (2.0 * kStep);
    CHECK((s.qd - fd_vel).cwiseAbs().maxCoeff() < 1e-6);
    const Eigen::VectorXd fd_acc =
        (traj.sample(t + kStep).qd - traj.sample(t - kStep).qd) / (2.0 * kStep);
    CHECK((s.qdd - fd_acc).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("peak velocity is 15 travel / (8 T) at midtime") {
  const QuinticTrajectory traj = example();
  const TrajectorySample mid = traj.sample(traj.duration() / 2.0);
  const Eigen::VectorXd expected =
      15.0 / (8.0 * traj.duration()) * (traj.end_q() - traj.start_q());
  CHECK((mid.qd - expected).cwiseAbs().maxCoeff() < 1e-12);

  // And it is the peak: a scan never exceeds it.
  double largest = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = traj.duration() * i / 2000.0;
    largest = std::max(largest, traj.sample(t).qd.cwiseAbs().maxCoeff());
  }
  CHECK(largest <= expected.cwiseAbs().maxCoeff() + 1e-12);
}

TEST_CASE("velocity integrates back to the travel") {
  const QuinticTrajectory traj = example();
  constexpr double kDt = 1e-4;
  const long steps = std::lround(traj.duration() / kDt);
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(3);
  for (long i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * kDt;
    integral += 0.5 * kDt * (traj.sample(t0).qd + traj.sample(t0 + kDt).qd);
  }
  CHECK((integral - (traj.end_q() - traj.start_q())).cwiseAbs().maxCoeff() <
        1e-6);
}

TEST_CASE("per-joint position is monotone when start and end differ") {
  const QuinticTrajectory traj = example();
  Eigen::VectorXd previous = traj.sample(0.0).q;
  for (int i = 1; i <= 500; ++i) {
    const Eigen::VectorXd current =
        traj.sample(traj.duration() * i / 500.0).q;
    for (int j = 0; j < 3; ++j) {
      const double direction = traj.end_q()(j) - traj.start_q()(j);
      CHECK(direction * (current(j) - previous(j)) >= -1e-12);
    }
    previous = current;
  }
}

TEST_CASE("planning rejects bad arguments") {
  CHECK_THROWS_AS(QuinticTrajectory::plan(Eigen::Vector3d::Zero(),
                                          Eigen::Vector3d::Ones(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuinticTrajectory::plan(Eigen::Vector3d::Zero(),
                                          Eigen::Vector3d::Ones(), -2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuinticTrajectory::plan(Eigen::Vector2d::Zero(),
                                          Eigen::Vector3d::Ones(), 1.0),
                  std::invalid_argument);
}
