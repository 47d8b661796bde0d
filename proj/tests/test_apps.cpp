#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "limitsurf/push.hpp"
#include "limitsurf/sliding.hpp"
#include "oracles.hpp"

using namespace limitsurf;

namespace {

// Two-point pusher on the bottom edge of a square object, pushing +y.
PushContact bottom_contact() {
  PushContact c;
  c.p1 = {-0.025, -0.05};
  c.p2 = {0.025, -0.05};
  c.normal = {0.0, 1.0};
  c.mu_contact = 1.0;
  return c;
}

double kinetic_energy(const BodyParams& body, const GeneralizedVelocity& twist) {
  const double omega = twist.vz / body.rho;
  return 0.5 * (body.mass * (twist.vx * twist.vx + twist.vy * twist.vy) +
                body.inertia_z * omega * omega);
}

}  // namespace

TEST_SUITE("apps") {

TEST_CASE("composite cone edge wrenches") {
  const auto edges = composite_cone(bottom_contact(), 1.0);
  const Eigen::Vector3d expected[4] = {{1.0, 1.0, 0.025},
                                       {-1.0, 1.0, -0.075},
                                       {1.0, 1.0, 0.075},
                                       {-1.0, 1.0, -0.025}};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& w : edges) found = found || (w - e).norm() <= 1e-12;
    CHECK(found);
  }
}

TEST_CASE("nnls solves interior and exterior cases exactly") {
  Rng rng(51);
  Eigen::Matrix<double, 3, Eigen::Dynamic> W(3, 4);
  for (int j = 0; j < 4; ++j) W.col(j) = rng.unit_sphere();
  Eigen::VectorXd truth(4);
  truth << 0.3, 0.0, 1.2, 0.05;
  const Eigen::Vector3d f = W * truth;
  Eigen::VectorXd lambda;
  CHECK(nnls_residual(W, f, &lambda) <= 1e-10);
  CHECK(lambda.minCoeff() >= 0.0);
  CHECK((W * lambda - f).norm() <= 1e-10);

  Eigen::Matrix<double, 3, Eigen::Dynamic> axes(3, 2);
  axes << 1, 0, 0, 1, 0, 0;
  CHECK(nnls_residual(axes, Eigen::Vector3d(-1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("push straight into the cone is stable, pivot against it is not") {
  const PolyModel sphere = oracle::sphere_quartic();
  const PushContact contact = bottom_contact();

  const StableResult stable = is_stable_push_twist(sphere, contact, translation_twist(0, 1));
  CHECK(stable.stable);
  CHECK(stable.margin <= 1e-6);
  CHECK((stable.required_load.vec() - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-9);

  // Frictionless contact can only supply +y force with tiny torque; rotating
  // about one contact point needs a sideways component.
  PushContact slick = contact;
  slick.mu_contact = 0.0;
  const StableResult unstable =
      is_stable_push(sphere, slick, COR{contact.p1.x(), contact.p1.y(), 1});
  CHECK_FALSE(unstable.stable);
  CHECK(unstable.margin >= 0.01);
}

TEST_CASE("stability is invariant to the data's load units") {
  const PolyModel base = oracle::sphere_quartic();
  PolyModel scaled = base;
  scaled.load_scale = 10.0 * base.load_scale;
  const PushContact contact = bottom_contact();
  for (const COR& cor : {COR{0.4, 0.1, 1}, COR{-2.0, 0.3, -1}, COR{0.0, 5.0, 1}}) {
    const StableResult a = is_stable_push(base, contact, cor);
    const StableResult b = is_stable_push(scaled, contact, cor);
    CHECK(a.stable == b.stable);
    CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-12));
  }
}

TEST_CASE("stability is equivariant under body-frame rotation") {
  const double th = 0.7;
  Eigen::Matrix2d R2;
  R2 << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::Matrix3d R3 = Eigen::Matrix3d::Identity();
  R3.topLeftCorner<2, 2>() = R2;

  const Eigen::Matrix3d A = Eigen::Vector3d(1.0, 1.5, 2.5).asDiagonal();
  const PolyModel model = make_quadratic_model(A);
  const PolyModel rotated = make_quadratic_model(R3 * A * R3.transpose());

  const PushContact contact = bottom_contact();
  PushContact rc = contact;
  rc.p1 = R2 * contact.p1;
  rc.p2 = R2 * contact.p2;
  rc.normal = R2 * contact.normal;

  for (const COR& cor : {COR{0.4, 0.1, 1}, COR{-1.0, 0.2, -1}, COR{0.03, -0.05, 1}}) {
    const Eigen::Vector2d rcor = R2 * Eigen::Vector2d(cor.cx, cor.cy);
    const StableResult a = is_stable_push(model, contact, cor);
    const StableResult b = is_stable_push(rotated, rc, COR{rcor.x(), rcor.y(), cor.sense});
    CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-9));
    CHECK(a.stable == b.stable);
  }
}

TEST_CASE("free translation matches the constant-deceleration closed form") {
  const PolyModel model = make_quadratic_model(Eigen::Matrix3d::Identity());
  BodyParams body;
  body.mass = 2.0;
  body.mu_support = 0.3;

  SlideState start;
  start.twist = {0.5, 0.0, 0.0};
  SimOptions options;
  options.step = 2e-4;
  const Trajectory traj = simulate_sliding(model, body, start, options);
  REQUIRE(traj.reached_rest);

  const double mug = body.mu_support * body.gravity;
  const double t_expected = 0.5 / mug;            // v0 / (mu g)
  const double d_expected = 0.25 / (2.0 * mug);   // v0^2 / (2 mu g)
  CHECK(std::abs(traj.states.back().time - t_expected) <= 0.005 * t_expected);
  CHECK(std::abs(traj.states.back().pose.x - d_expected) <= 0.005 * d_expected);
  CHECK(std::abs(traj.states.back().pose.y) <= 1e-9);

  // Friction only dissipates.
  double ke_prev = kinetic_energy(body, traj.states.front().twist);
  for (const auto& s : traj.states) {
    const double ke = kinetic_energy(body, s.twist);
    CHECK(ke <= ke_prev + 1e-12);
    ke_prev = ke;
  }
  CHECK(final_twist_direction(traj).isApprox(Eigen::Vector3d(1, 0, 0), 1e-9));
}

TEST_CASE("free rotation stops at rho*omega0/(mu*g) for the default inertia") {
  const PolyModel sphere = oracle::sphere_quartic();
  BodyParams body;  // mass 1, inertia 1, rho 1: radius of gyration 1
  SlideState start;
  start.twist = {0.0, 0.0, 3.0};  // omega0 = 3
  SimOptions options;
  options.step = 2e-4;
  const Trajectory traj = simulate_sliding(sphere, body, start, options);
  REQUIRE(traj.reached_rest);
  const double t_expected = 3.0 / (body.mu_support * body.gravity);
  CHECK(std::abs(traj.states.back().time - t_expected) <= 0.005 * t_expected);
  CHECK(std::abs(traj.states.back().pose.x) <= 1e-12);
  CHECK(std::abs(traj.states.back().pose.y) <= 1e-12);
}

TEST_CASE("rest is detected even with an unreachable velocity floor") {
  // The stopping condition must not rely on ||V|| crossing v_stop: friction is
  // antisymmetric, so a step spanning the rest instant cancels its own stage
  // contributions and the twist can freeze above any tiny floor.
  const PolyModel model = make_quadratic_model(Eigen::Matrix3d::Identity());
  BodyParams body;
  SlideState start;
  start.twist = {0.2, -0.1, 0.05};
  SimOptions options;
  options.v_stop = 1e-9;
  const Trajectory traj = simulate_sliding(model, body, start, options);
  CHECK(traj.reached_rest);
  CHECK(traj.states.back().time < 0.2);  // |V0| / (mu g) is about 0.077 s
  CHECK(traj.states.back().twist.norm() == 0.0);
}

TEST_CASE("trajectory loads ride the fitted level set") {
  const PolyModel sphere = oracle::sphere_quartic();
  BodyParams body;
  body.mass = 1.5;
  SlideState start;
  start.twist = {0.3, 0.2, -0.4};
  const Trajectory traj = simulate_sliding(sphere, body, start, SimOptions{});
  REQUIRE(traj.reached_rest);
  REQUIRE(traj.loads.size() == traj.states.size());
  const double c = sphere.load_scale * body.mu_support * body.mass * body.gravity;
  for (size_t i = 0; i + 1 < traj.loads.size(); ++i) {
    CHECK(evaluate(sphere, traj.loads[i] * (1.0 / c)) == doctest::Approx(1.0).epsilon(1e-8));
    // Limit-surface loads align with the twist; the applied friction is -F.
    CHECK(power(traj.loads[i], traj.states[i].twist) > 0.0);
  }
  CHECK(traj.loads.back().norm() == 0.0);

  SimOptions brief;
  brief.max_time = 0.01;
  const Trajectory cut = simulate_sliding(sphere, body, start, brief);
  CHECK_FALSE(cut.reached_rest);
  CHECK_THROWS_AS(final_twist_direction(cut), std::runtime_error);
}

}  // TEST_SUITE
