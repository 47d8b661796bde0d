#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace limitsurf {

// Generalized friction load in the normalized wrench space: planar force
// components plus torque scaled by a characteristic length, (fx, fy, tau/rho).
// All three components share force units.
struct GeneralizedLoad {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;  // tau / rho

  GeneralizedLoad() = default;
  GeneralizedLoad(double x, double y, double z) : fx(x), fy(y), fz(z) {}
  explicit GeneralizedLoad(const Eigen::Vector3d& v) : fx(v.x()), fy(v.y()), fz(v.z()) {}

  Eigen::Vector3d vec() const { return {fx, fy, fz}; }
  double norm() const { return vec().norm(); }
  bool finite() const { return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(fz); }

  GeneralizedLoad operator-() const { return {-fx, -fy, -fz}; }
  GeneralizedLoad operator*(double s) const { return {s * fx, s * fy, s * fz}; }
};

// Generalized velocity in the matching twist space: planar velocity components
// plus angular rate scaled by rho, (vx, vy, omega*rho). Shares units with the
// linear components, so dot products against GeneralizedLoad are power.
struct GeneralizedVelocity {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;  // omega * rho

  GeneralizedVelocity() = default;
  GeneralizedVelocity(double x, double y, double z) : vx(x), vy(y), vz(z) {}
  explicit GeneralizedVelocity(const Eigen::Vector3d& v) : vx(v.x()), vy(v.y()), vz(v.z()) {}

  Eigen::Vector3d vec() const { return {vx, vy, vz}; }
  double norm() const { return vec().norm(); }
  bool finite() const { return std::isfinite(vx) && std::isfinite(vy) && std::isfinite(vz); }

  // Unit direction of the twist. Errors on the zero twist.
  Eigen::Vector3d unit_direction() const {
    const Eigen::Vector3d v = vec();
    const double n = v.norm();
    if (n == 0.0) throw std::domain_error("unit_direction: zero twist has no direction");
    return v / n;
  }

  GeneralizedVelocity operator-() const { return {-vx, -vy, -vz}; }
  GeneralizedVelocity operator*(double s) const { return {s * vx, s * vy, s * vz}; }
};

// Rigid-body parameters for the sliding object.
struct BodyParams {
  double mass = 1.0;        // kg
  double inertia_z = 1.0;   // kg m^2 about the COM vertical axis
  double rho = 1.0;         // characteristic length, m
  double mu_support = 0.3;  // support-surface friction coefficient
  double gravity = 9.81;    // m/s^2

  void validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("BodyParams: mass must be > 0");
    if (!(inertia_z > 0.0)) throw std::invalid_argument("BodyParams: inertia_z must be > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("BodyParams: rho must be > 0");
    if (!(mu_support >= 0.0)) throw std::invalid_argument("BodyParams: mu_support must be >= 0");
    if (!(gravity > 0.0)) throw std::invalid_argument("BodyParams: gravity must be > 0");
  }

  // Default characteristic length: radius of gyration.
  static double radius_of_gyration(double mass, double inertia_z) {
    if (!(mass > 0.0) || !(inertia_z > 0.0))
      throw std::invalid_argument("radius_of_gyration: mass and inertia_z must be > 0");
    return std::sqrt(inertia_z / mass);
  }
};

// World-frame planar pose. theta is kept unwrapped so trajectories integrate
// without jumps.
struct PoseSE2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

// (fx, fy, tau) -> (fx, fy, tau/rho)
inline GeneralizedLoad embed_wrench(double fx, double fy, double tau, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("embed_wrench: rho must be > 0");
  return {fx, fy, tau / rho};
}

// (vx, vy, omega) -> (vx, vy, omega*rho)
inline GeneralizedVelocity embed_twist(double vx, double vy, double omega, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("embed_twist: rho must be > 0");
  return {vx, vy, omega * rho};
}

// Dot product in the normalized space; equals the physical dissipated power
// fx*vx + fy*vy + tau*omega when both sides use the same rho.
inline double power(const GeneralizedLoad& f, const GeneralizedVelocity& v) {
  return f.fx * v.vx + f.fy * v.vy + f.fz * v.vz;
}

}  // namespace limitsurf
