#pragma once

#include "limitsurf/poly.hpp"

namespace limitsurf {

struct InversionOptions {
  int max_iterations = 100;
  double step_tolerance = 1e-12;      // on the accepted step norm
  double residual_tolerance = 1e-10;  // on ||grad H(F) - V||
  double damping = 0.0;               // initial Levenberg parameter
};

// Inverse of the gradient map: the load on the 1-level set whose normalized
// gradient equals the unit twist direction V. Newton iteration on
// grad H(F) = V from F0 = V, with backtracking on G(F) = 0.5 ||grad H - V||^2
// and Levenberg damping when the Hessian is ill-conditioned; the converged
// iterate is rescaled onto the level set (direction is unaffected by
// homogeneity). Requires a certified convex model.
GeneralizedLoad invert(const PolyModel& model, const GeneralizedVelocity& V,
                       const InversionOptions& options = {});

}  // namespace limitsurf
