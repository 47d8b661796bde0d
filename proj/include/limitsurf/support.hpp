#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "limitsurf/rng.hpp"
#include "limitsurf/wrench.hpp"

namespace limitsurf {

// Raised when a queried twist makes some support point's velocity vanish: the
// load is indeterminate there (a limit-surface facet). Callers wanting data on
// the facet should use sample_facet instead.
class FacetDegeneracyError : public std::runtime_error {
 public:
  explicit FacetDegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

struct SupportPoint {
  double rx = 0.0;  // body frame, m
  double ry = 0.0;
  double pressure = 0.0;  // normalized normal force
};

// Point-support ground truth: pressures sum to one and the center of pressure
// sits at the origin.
struct SupportConfig {
  std::vector<SupportPoint> points;
  double mu = 1.0;
  double rho = 1.0;
  std::string kind = "custom";  // ring | square | legged | custom

  void validate() const;
};

struct DataPair {
  GeneralizedLoad F;
  GeneralizedVelocity V;  // unit direction
};

struct DatasetMeta {
  double rho = 1.0;
  double mu = 1.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  SupportConfig support;
};

struct Dataset {
  std::vector<DataPair> pairs;
  DatasetMeta meta;
};

enum class SupportKind { kRing, kSquare };
enum class Protocol { kUniform, kLegged };

// Generalized friction load for a twist: per-point Coulomb friction summed
// over the support, torque normalized by rho. Pure in cfg and V. Throws
// FacetDegeneracyError when a point velocity falls below 1e-12 * |V|.
GeneralizedLoad load_for_twist(const SupportConfig& cfg, const GeneralizedVelocity& V);

// Facet sample with an explicit pivot friction force (must lie in the pivot's
// friction disk). The twist is the unit rotation about the pivot with the
// given sense; non-pivot points contribute determined Coulomb friction.
DataPair facet_load(const SupportConfig& cfg, int pivot_index, int sense,
                    const Eigen::Vector2d& pivot_force);

// Facet sample with the pivot force drawn uniformly from its friction disk.
DataPair sample_facet(const SupportConfig& cfg, int pivot_index, int sense, Rng& rng);

// Equal-pressure supports: n points at equal angles on the unit circle, or a
// regular grid over [-1,1]^2 (side = round(sqrt(n)), so the realized count is
// the nearest perfect square). Center of pressure is re-centered to the origin.
SupportConfig gen_uniform_support(SupportKind kind, int n_points);

// Three points uniform on the unit circle with simplex-uniform pressures,
// translated so the center of pressure is the origin. Draws with two points
// closer than 1e-6 are rejected and resampled.
SupportConfig gen_legged_support(Rng& rng);

// Uniform protocol: n isotropic unit twists paired with oracle loads. Legged
// protocol: n/2 facet samples spread round-robin over the 6 facets (3 pivots
// x 2 senses) plus n - n/2 uniform-twist pairs.
Dataset gen_dataset(const SupportConfig& cfg, Protocol protocol, int n, Rng& rng);

// I.i.d. Gaussian noise on every component of F and V; V is renormalized to
// unit length (noise resampled for a pair if the noisy V nearly vanishes).
// sigma = 0 returns the dataset unchanged.
Dataset add_noise(const Dataset& ds, double sigma, Rng& rng);

struct SplitPlan {
  std::vector<int> test;
  std::vector<int> validation;
  std::vector<int> pool;
  std::vector<std::vector<int>> train_sets;  // nested prefixes of pool
};

struct SplitFractions {
  double test = 0.5;
  double validation = 0.2;
  double train_pool = 0.3;
};

// Disjoint shuffled index sets; training subsets are nested prefixes of the
// pool so sweeps over train size share their smaller subsets.
SplitPlan split_dataset(const Dataset& ds, const SplitFractions& fractions,
                        const std::vector<int>& train_sizes, Rng& rng);

Dataset subset(const Dataset& ds, const std::vector<int>& indices);

}  // namespace limitsurf
