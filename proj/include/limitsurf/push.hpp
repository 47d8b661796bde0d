#pragma once

#include <array>

#include "limitsurf/invert.hpp"
#include "limitsurf/poly.hpp"

namespace limitsurf {

// Two-point pusher contact on the object boundary, body frame.
struct PushContact {
  Eigen::Vector2d p1{0.0, 0.0};
  Eigen::Vector2d p2{0.0, 0.0};
  Eigen::Vector2d normal{0.0, 1.0};  // inward, unit
  double mu_contact = 1.0;

  void validate() const;
};

struct COR {
  double cx = 0.0;
  double cy = 0.0;
  int sense = 1;  // +1 counterclockwise
};

// Unit twist of the rigid rotation about the COR: body-origin velocity
// (sense*cy, -sense*cx), angular component sense*rho.
GeneralizedVelocity cor_to_twist(const COR& cor, double rho);

// Unit twist of a pure translation along (dx, dy).
GeneralizedVelocity translation_twist(double dx, double dy);

// Edge wrenches of the composite friction cone: per contact point the two
// forces n +- mu_c * t mapped to (fx, fy, (p x f)/rho). The cone is their
// nonnegative span.
std::array<Eigen::Vector3d, 4> composite_cone(const PushContact& contact, double rho);

struct StableResult {
  bool stable = false;
  double margin = 0.0;  // NNLS residual against the normalized required load
  GeneralizedLoad required_load;
};

// Stability of pushing with the given twist: the required support load
// invert(model, V), normalized, must lie in the composite cone. Membership is
// decided by nonnegative least squares over the 4 edge wrenches with residual
// tolerance 1e-6 (ties break to unstable).
StableResult is_stable_push_twist(const PolyModel& model, const PushContact& contact,
                                  const GeneralizedVelocity& V);

StableResult is_stable_push(const PolyModel& model, const PushContact& contact, const COR& cor);

// Exact nonnegative least squares for a handful of generators (support-set
// enumeration). Returns the residual norm; lambda receives the coefficients.
double nnls_residual(const Eigen::Matrix<double, 3, Eigen::Dynamic>& W, const Eigen::Vector3d& f,
                     Eigen::VectorXd* lambda = nullptr);

}  // namespace limitsurf
