#pragma once

#include <string>
#include <vector>

#include "limitsurf/invert.hpp"
#include "limitsurf/poly.hpp"
#include "limitsurf/wrench.hpp"

namespace limitsurf {

struct SlideState {
  PoseSE2 pose;                // world frame
  GeneralizedVelocity twist;   // body frame, (vx, vy, omega*rho)
  double time = 0.0;
};

// Diagonal generalized mass diag(m, m, I_z / rho^2): in the normalized
// coordinates (V3 = omega*rho, F3 = tau/rho) the momentum balance is exactly
// M dV/dt = -F.
struct GeneralizedMass {
  double linear = 1.0;
  double angular = 1.0;  // I_z / rho^2

  static GeneralizedMass from_body(const BodyParams& body);
  Eigen::Vector3d diagonal() const { return {linear, linear, angular}; }
  void validate() const;
};

struct SimOptions {
  double step = 1e-3;             // s
  double v_stop = 0.0;            // absolute; <= 0 means 1e-4 * ||V0||
  double max_time = 300.0;        // s, safety cap
  InversionOptions inversion;
};

struct Trajectory {
  std::vector<SlideState> states;
  std::vector<GeneralizedLoad> loads;  // applied friction load per state, data units
  bool reached_rest = false;
  double v_stop = 0.0;
};

// Free sliding under the model's friction map: M dV/dt = -c * invert(V/||V||)
// in the body frame with c = load_scale * mu * m * g, plus world-frame
// kinematics, integrated with classical fixed-step RK4. Terminates by
// clamping to rest once ||V|| <= v_stop or the twist direction reverses
// within a step (zero crossing). Requires a certified convex model.
Trajectory simulate_sliding(const PolyModel& model, const BodyParams& body,
                            const SlideState& initial, const SimOptions& options = {});

// Unit twist direction at the last pre-rest sample. Errors if the trajectory
// never reached rest.
Eigen::Vector3d final_twist_direction(const Trajectory& trajectory);

}  // namespace limitsurf
