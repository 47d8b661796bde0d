#pragma once

#include "limitsurf/poly.hpp"
#include "limitsurf/support.hpp"

namespace limitsurf {

struct AngularError {
  double mean_degrees = 0.0;
  int undefined_predictions = 0;  // pairs that contributed the 90-degree fallback
};

// Mean angular error between predicted and measured twist directions, in
// degrees. Dot products are clamped to [-1, 1]; a pair whose prediction is
// undefined (vanishing gradient) contributes 90 degrees and is counted.
AngularError angular_error(const PolyModel& model, const Dataset& test);

}  // namespace limitsurf
