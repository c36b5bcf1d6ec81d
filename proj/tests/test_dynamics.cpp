#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "armsim/dynamics.hpp"
#include "armsim/robot_model.hpp"

using namespace armsim;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd random_vec(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = dist(rng);
  }
  return v;
}

// Test-side DH composition, kept separate from the library kinematics so the
// gravity oracle below does not share code with the implementation under
// test.
Eigen::Matrix4d oracle_dh(const LinkParams& link, double q) {
  const double t = q + link.theta_offset;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = std::cos(t);
  m(0, 1) = -std::sin(t) * std::cos(link.alpha);
  m(0, 2) = std::sin(t) * std::sin(link.alpha);
  m(0, 3) = link.a * std::cos(t);
  m(1, 0) = std::sin(t);
  m(1, 1) = std::cos(t) * std::cos(link.alpha);
  m(1, 2) = -std::cos(t) * std::sin(link.alpha);
  m(1, 3) = link.a * std::sin(t);
  m(2, 1) = std::sin(link.alpha);
  m(2, 2) = std::cos(link.alpha);
  m(2, 3) = link.d;
  return m;
}

// Potential energy from first principles: sum of m g h over the link COMs.
double oracle_potential(const RobotModel& model, const Eigen::VectorXd& q) {
  double v = 0.0;
  Eigen::Matrix4d chain = Eigen::Matrix4d::Identity();
  for (int i = 0; i < model.dof(); ++i) {
    const LinkParams& link = model.links[static_cast<std::size_t>(i)];
    chain = chain * oracle_dh(link, q(i));
    Eigen::Vector4d com_h;
    com_h << link.com, 1.0;
    const Eigen::Vector3d com_world = (chain * com_h).head<3>();
    v -= link.mass * model.gravity.dot(com_world);
  }
  return v;
}

// One-joint swing arm with in-plane gravity; closed form
// tau = (Izz + m lc^2) qdd + m g lc cos(q).
RobotModel pendulum_model() {
  RobotModel model;
  model.gravity = Eigen::Vector3d(0.0, -9.81, 0.0);
  LinkParams link;
  link.a = 1.0;
  link.mass = 1.0;
  link.com = Eigen::Vector3d(-0.5, 0.0, 0.0);
  const double transverse = link.mass / 12.0;
  link.inertia = Eigen::Vector3d(0.0, transverse, transverse).asDiagonal();
  model.links.push_back(link);
  return model;
}

}  // namespace

TEST_CASE("no motion, no gravity, no torque") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(100);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    const Eigen::VectorXd tau =
        inverse_dynamics(model, q, zero, zero, Eigen::Vector3d::Zero());
    CHECK(tau.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("static torques at the stretched-out pose") {
  const RobotModel model = default_rrr_model();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd tau = inverse_dynamics(model, zero, zero, zero);

  // Gravity has no moment about the vertical waist axis.
  CHECK(tau(0) == 0.0);

  // Static-moment oracle: sum of m g times the horizontal COM arm about the
  // shoulder, 9.81 (1.50 * 0.150 + 1.25 * (0.300 + 0.125)) = 7.4188125.
  const double m2 = model.links[1].mass;
  const double m3 = model.links[2].mass;
  const double arm2 = model.links[1].a + model.links[1].com.x();  // 0.150
  const double arm3 =
      model.links[1].a + model.links[2].a + model.links[2].com.x();  // 0.425
  const double oracle = 9.81 * (m2 * arm2 + m3 * arm3);
  CHECK(oracle == doctest::Approx(7.4188125).epsilon(1e-12));
  CHECK(tau(1) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("gravity vector equals the potential-energy gradient") {
  const RobotModel model = default_rrr_model();
  constexpr double kStep = 1e-6;
  std::mt19937 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::VectorXd g = gravity_vector(model, q);
    CHECK(g(0) == doctest::Approx(0.0).epsilon(0).scale(1e-12));
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd plus = q;
      Eigen::VectorXd minus = q;
      plus(j) += kStep;
      minus(j) -= kStep;
      const double fd = (oracle_potential(model, plus) -
                         oracle_potential(model, minus)) /
                        (2.0 * kStep);
      CHECK(std::abs(g(j) - fd) < 1e-7);
    }
  }
}

TEST_CASE("gravity off yields a zero gravity-path torque") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(102);
  const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd tau =
      inverse_dynamics(model, q, zero, zero, Eigen::Vector3d::Zero());
  CHECK(tau.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mass matrix is symmetric positive definite") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(103);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::MatrixXd m = mass_matrix(model, q);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::VectorXd x = random_vec(rng, 3, -1.0, 1.0);
    if (x.norm() > 1e-6) {
      CHECK(x.dot(m * x) > 0.0);
    }
  }
}

TEST_CASE("waist inertia at the stretched pose matches the rod integral") {
  const RobotModel model = default_rrr_model();
  // Brute force: integrate r^2 dm along each rod about the base z-axis at
  // q = 0. Link 1 lies on the axis; links 2 and 3 lie horizontally at
  // x in [0, 0.30] and [0.30, 0.55] with 5 kg/m.
  constexpr int kSlices = 100000;
  auto rod_about_z = [](double x0, double x1, double density) {
    const double width = (x1 - x0) / kSlices;
    double sum = 0.0;
    for (int i = 0; i < kSlices; ++i) {
      const double x = x0 + (i + 0.5) * width;
      sum += x * x * density * width;
    }
    return sum;
  };
  const double oracle = rod_about_z(0.0, 0.30, 5.0) + rod_about_z(0.30, 0.55, 5.0);
  CHECK(oracle == doctest::Approx(0.27729166666666664).epsilon(1e-9));

  const Eigen::MatrixXd m = mass_matrix(model, Eigen::VectorXd::Zero(3));
  CHECK(m(0, 0) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("velocity terms vanish at rest and scale quadratically") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(104);
  const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
  const Eigen::VectorXd qd = random_vec(rng, 3, -2.0, 2.0);

  CHECK(coriolis_vector(model, q, Eigen::VectorXd::Zero(3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  const Eigen::VectorXd once = coriolis_vector(model, q, qd);
  const Eigen::VectorXd twice = coriolis_vector(model, q, 2.0 * qd);
  CHECK((twice - 4.0 * once).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("torque decomposition identity holds at random states") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(105);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::VectorXd qd = random_vec(rng, 3, -2.0, 2.0);
    const Eigen::VectorXd qdd = random_vec(rng, 3, -2.0, 2.0);
    const Eigen::VectorXd lhs = inverse_dynamics(model, q, qd, qdd);
    const Eigen::VectorXd rhs = mass_matrix(model, q) * qdd +
                                coriolis_vector(model, q, qd) +
                                gravity_vector(model, q);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("coriolis matrix reproduces the vector and the skew property") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(106);
  constexpr double kStep = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::VectorXd qd = random_vec(rng, 3, -1.5, 1.5);
    const Eigen::MatrixXd c = coriolis_matrix(model, q, qd);

    CHECK((c * qd - coriolis_vector(model, q, qd)).cwiseAbs().maxCoeff() <
          1e-8);

    const Eigen::MatrixXd mdot = (mass_matrix(model, q + kStep * qd) -
                                  mass_matrix(model, q - kStep * qd)) /
                                 (2.0 * kStep);
    const Eigen::VectorXd x = random_vec(rng, 3, -1.0, 1.0);
    CHECK(std::abs(x.dot((mdot - 2.0 * c) * x)) < 1e-6);
  }

  CHECK((coriolis_matrix(model, Eigen::VectorXd::Zero(3),
                         Eigen::VectorXd::Zero(3)) *
         Eigen::VectorXd::Zero(3))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("forward dynamics inverts inverse dynamics") {
  const RobotModel model = default_rrr_model();
  std::mt19937 rng(107);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
    const Eigen::VectorXd qd = random_vec(rng, 3, -2.0, 2.0);
    const Eigen::VectorXd qdd = random_vec(rng, 3, -2.0, 2.0);
    const Eigen::VectorXd tau = inverse_dynamics(model, q, qd, qdd);
    const Eigen::VectorXd back = forward_dynamics(model, {q, qd}, tau);
    worst = std::max(worst, (back - qdd).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("equilibrium and free fall") {
  const RobotModel model = default_rrr_model();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);

  RobotModel weightless = model;
  weightless.gravity.setZero();
  CHECK(forward_dynamics(weightless, {zero, zero}, zero).cwiseAbs().maxCoeff() <
        1e-14);

  // Unpowered drop: qdd = -M^{-1} G, cross-checked with an independent
  // full-pivot solve.
  const Eigen::VectorXd qdd = forward_dynamics(model, {zero, zero}, zero);
  const Eigen::MatrixXd m = mass_matrix(model, zero);
  const Eigen::VectorXd expected =
      Eigen::FullPivLU<Eigen::MatrixXd>(m).solve(-gravity_vector(model, zero));
  CHECK((qdd - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("one-link chain reproduces the pendulum equation") {
  const RobotModel model = pendulum_model();
  const double inertia_effective = 1.0 / 12.0 + 1.0 * 0.5 * 0.5;
  const double gravity_term = 1.0 * 9.81 * 0.5;

  std::mt19937 rng(108);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd q(1), qd(1), qdd(1);
    q << dist(rng);
    qd << dist(rng);
    qdd << dist(rng);
    const double expected =
        inertia_effective * qdd(0) + gravity_term * std::cos(q(0));
    const Eigen::VectorXd tau = inverse_dynamics(model, q, qd, qdd);
    CHECK(std::abs(tau(0) - expected) < 1e-10);
  }
}

TEST_CASE("total energy of known states") {
  const RobotModel model = default_rrr_model();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);

  RobotModel weightless = model;
  weightless.gravity.setZero();
  CHECK(total_energy(weightless, {zero, zero}) == 0.0);

  // Hand-summed COM heights at q = 0:
  // 9.81 (1.05 * 0.105 + 1.50 * 0.210 + 1.25 * 0.210) = 6.7468275 J.
  CHECK(total_energy(model, {zero, zero}) ==
        doctest::Approx(6.7468275).epsilon(1e-12));

  std::mt19937 rng(109);
  const Eigen::VectorXd q = random_vec(rng, 3, -kPi, kPi);
  CHECK(total_energy(model, {q, zero}) ==
        doctest::Approx(oracle_potential(model, q)).epsilon(1e-12));
}

TEST_CASE("bad inputs are rejected") {
  const RobotModel model = default_rrr_model();
  const Eigen::VectorXd zero3 = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(2);

  CHECK_THROWS_AS(inverse_dynamics(model, zero2, zero3, zero3),
                  std::invalid_argument);
  CHECK_THROWS_AS(mass_matrix(model, zero2), std::invalid_argument);
  CHECK_THROWS_AS(forward_dynamics(model, {zero3, zero2}, zero3),
                  std::invalid_argument);

  Eigen::VectorXd bad = zero3;
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(inverse_dynamics(model, bad, zero3, zero3),
                  std::invalid_argument);
}
