#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace limitsurf {

// Seeded random stream with hand-rolled distributions. std::*_distribution
// output is implementation-defined, so drawing directly from the engine keeps
// results identical across standard libraries and across reruns.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for worker `index` under a master seed. Streams derived
  // this way never depend on scheduling order.
  static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(mix(master_seed ^ mix(index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Marsaglia polar method (second deviate cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * r;
    has_spare_ = true;
    return u * r;
  }

  // Isotropic unit vector (normalized Gaussian triple).
  Eigen::Vector3d unit_sphere() {
    Eigen::Vector3d g;
    double n2;
    do {
      g << gaussian(), gaussian(), gaussian();
      n2 = g.squaredNorm();
    } while (n2 < 1e-24);
    return g / std::sqrt(n2);
  }

  // Uniform over the disk of radius `radius`.
  Eigen::Vector2d disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    const double t = 2.0 * M_PI * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace limitsurf
