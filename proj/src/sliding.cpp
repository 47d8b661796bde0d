#include "limitsurf/sliding.hpp"

#include <cmath>
#include <stdexcept>

namespace limitsurf {
namespace {

using Vector6d = Eigen::Matrix<double, 6, 1>;

Vector6d pack(const SlideState& s) {
  Vector6d y;
  y << s.pose.x, s.pose.y, s.pose.theta, s.twist.vx, s.twist.vy, s.twist.vz;
  return y;
}

SlideState unpack(const Vector6d& y, double t) {
  SlideState s;
  s.pose = {y(0), y(1), y(2)};
  s.twist = {y(3), y(4), y(5)};
  s.time = t;
  return s;
}

}  // namespace

GeneralizedMass GeneralizedMass::from_body(const BodyParams& body) {
  body.validate();
  return {body.mass, body.inertia_z / (body.rho * body.rho)};
}

void GeneralizedMass::validate() const {
  if (!(linear > 0.0) || !(angular > 0.0)) {
    throw std::invalid_argument("generalized mass entries must be positive");
  }
}

Trajectory simulate_sliding(const PolyModel& model, const BodyParams& body,
                            const SlideState& initial, const SimOptions& options) {
  model.validate();
  body.validate();
  if (!model.certificate.has_value()) {
    throw std::invalid_argument("simulate_sliding: model carries no convexity certificate");
  }
  if (std::abs(body.rho - model.rho) > 1e-9 * std::max(1.0, model.rho)) {
    throw std::invalid_argument("simulate_sliding: body and model rho disagree");
  }
  if (!(options.step > 0.0) || !(options.max_time > 0.0)) {
    throw std::invalid_argument("simulate_sliding: step and max_time must be positive");
  }

  const GeneralizedMass mass = GeneralizedMass::from_body(body);
  const Eigen::Vector3d minv = mass.diagonal().cwiseInverse();
  const double c = model.load_scale * body.mu_support * body.mass * body.gravity;
  const double rho = model.rho;
  const double v0 = initial.twist.norm();
  const double v_stop = options.v_stop > 0.0 ? options.v_stop : 1e-4 * v0;

  Trajectory traj;
  traj.v_stop = v_stop;

  // Friction load (data units) for a twist; zero below the rest floor so RK4
  // stages that land on (or cross) rest stay well-defined.
  const double v_floor = std::max(1e-15 * std::max(v0, 1.0), 1e-300);
  auto load_at = [&](const Eigen::Vector3d& V) -> Eigen::Vector3d {
    if (V.norm() <= v_floor) return Eigen::Vector3d::Zero();
    const GeneralizedLoad F =
        invert(model, GeneralizedVelocity(V / V.norm()), options.inversion);
    return c * F.vec();
  };
  auto deriv = [&](const Vector6d& y) -> Vector6d {
    const Eigen::Vector3d V = y.tail<3>();
    Vector6d dy;
    const double ct = std::cos(y(2)), st = std::sin(y(2));
    dy(0) = ct * V.x() - st * V.y();
    dy(1) = st * V.x() + ct * V.y();
    dy(2) = V.z() / rho;
    dy.tail<3>() = -minv.cwiseProduct(load_at(V));
    return dy;
  };

  Vector6d y = pack(initial);
  double t = initial.time;
  if (v0 <= v_stop) {
    SlideState rest = initial;
    rest.twist = {0.0, 0.0, 0.0};
    traj.states.push_back(rest);
    traj.loads.emplace_back(0.0, 0.0, 0.0);
    traj.reached_rest = true;
    return traj;
  }

  try {
    traj.states.push_back(initial);
    traj.loads.emplace_back(Eigen::Vector3d(load_at(initial.twist.vec())));
    const double h = options.step;
    while (t - initial.time < options.max_time) {
      const Eigen::Vector3d v_prev = y.tail<3>();
      const Vector6d k1 = deriv(y);
      const Vector6d y2 = y + 0.5 * h * k1;
      const Vector6d k2 = deriv(y2);
      const Vector6d y3 = y + 0.5 * h * k2;
      const Vector6d k3 = deriv(y3);
      const Vector6d y4 = y + h * k3;
      const Vector6d k4 = deriv(y4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;

      const Eigen::Vector3d v_new = y.tail<3>();
      // A reversed direction at the endpoint or at any stage sample means the
      // step integrated through rest. The stage check matters: friction is
      // antisymmetric, so once |V| drops below step*decel the reversed-stage
      // contributions cancel the forward ones exactly and the twist freezes.
      const bool reversed = v_new.dot(v_prev) < 0.0 || y2.tail<3>().dot(v_prev) < 0.0 ||
                            y3.tail<3>().dot(v_prev) < 0.0 || y4.tail<3>().dot(v_prev) < 0.0;
      if (v_new.norm() <= v_stop || reversed) {
        y.tail<3>().setZero();
        traj.states.push_back(unpack(y, t));
        traj.loads.emplace_back(0.0, 0.0, 0.0);
        traj.reached_rest = true;
        return traj;
      }
      traj.states.push_back(unpack(y, t));
      traj.loads.emplace_back(Eigen::Vector3d(load_at(v_new)));
    }
  } catch (const std::runtime_error&) {
    // Inversion failure mid-flight: return what was integrated so far.
    traj.reached_rest = false;
  }
  return traj;
}

Eigen::Vector3d final_twist_direction(const Trajectory& trajectory) {
  if (!trajectory.reached_rest) {
    throw std::runtime_error("final_twist_direction: trajectory never reached rest");
  }
  for (auto it = trajectory.states.rbegin(); it != trajectory.states.rend(); ++it) {
    if (it->twist.norm() > trajectory.v_stop) return it->twist.unit_direction();
  }
  throw std::runtime_error("final_twist_direction: trajectory has no moving sample");
}

}  // namespace limitsurf
