#include "limitsurf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace limitsurf {

AngularError angular_error(const PolyModel& model, const Dataset& test) {
  if (test.pairs.empty()) throw std::invalid_argument("angular_error: empty dataset");
  AngularError out;
  double sum = 0.0;
  for (const auto& pair : test.pairs) {
    const Eigen::Vector3d v = pair.V.unit_direction();
    double deg;
    try {
      const Eigen::Vector3d p = predict_velocity_direction(model, pair.F);
      deg = std::acos(std::clamp(p.dot(v), -1.0, 1.0)) * 180.0 / M_PI;
    } catch (const std::domain_error&) {
      deg = 90.0;
      ++out.undefined_predictions;
    }
    sum += deg;
  }
  out.mean_degrees = sum / static_cast<double>(test.pairs.size());
  return out;
}

}  // namespace limitsurf
