#include "limitsurf/support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace limitsurf {
namespace {

constexpr double kBalanceTol = 1e-9;
constexpr double kDegeneracyTol = 1e-12;

void check_pivot(const SupportConfig& cfg, int pivot_index, int sense) {
  if (pivot_index < 0 || pivot_index >= static_cast<int>(cfg.points.size())) {
    throw std::invalid_argument("facet pivot index out of range");
  }
  if (sense != 1 && sense != -1) {
    throw std::invalid_argument("facet sense must be +1 or -1");
  }
  if (!(cfg.points[pivot_index].pressure > 0.0)) {
    throw FacetDegeneracyError("facet pivot carries no pressure");
  }
}

}  // namespace

void SupportConfig::validate() const {
  if (points.empty()) throw std::invalid_argument("support has no points");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("support mu must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("support rho must be positive");
  double sum = 0.0, cx = 0.0, cy = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.rx) || !std::isfinite(p.ry) || !std::isfinite(p.pressure)) {
      throw std::invalid_argument("support point is not finite");
    }
    if (p.pressure < -kBalanceTol) throw std::invalid_argument("support pressure is negative");
    sum += p.pressure;
    cx += p.pressure * p.rx;
    cy += p.pressure * p.ry;
  }
  if (std::abs(sum - 1.0) > kBalanceTol) {
    throw std::invalid_argument("support pressures must sum to one");
  }
  if (std::abs(cx) > kBalanceTol || std::abs(cy) > kBalanceTol) {
    throw std::invalid_argument("support center of pressure must be the origin");
  }
}

GeneralizedLoad load_for_twist(const SupportConfig& cfg, const GeneralizedVelocity& V) {
  const double vnorm = V.norm();
  if (!(vnorm > 0.0) || !V.finite()) {
    throw std::invalid_argument("twist must be finite and nonzero");
  }
  const double omega = V.vz / cfg.rho;
  double fx = 0.0, fy = 0.0, tau = 0.0;
  for (const auto& p : cfg.points) {
    const double vix = V.vx - omega * p.ry;
    const double viy = V.vy + omega * p.rx;
    const double speed = std::hypot(vix, viy);
    if (speed < kDegeneracyTol * vnorm) {
      throw FacetDegeneracyError("support point velocity vanishes; load lies on a facet");
    }
    const double scale = cfg.mu * p.pressure / speed;
    const double fix = scale * vix;
    const double fiy = scale * viy;
    fx += fix;
    fy += fiy;
    tau += p.rx * fiy - p.ry * fix;
  }
  return {fx, fy, tau / cfg.rho};
}

DataPair facet_load(const SupportConfig& cfg, int pivot_index, int sense,
                    const Eigen::Vector2d& pivot_force) {
  cfg.validate();
  check_pivot(cfg, pivot_index, sense);
  const SupportPoint& piv = cfg.points[pivot_index];
  const double cap = cfg.mu * piv.pressure;
  if (pivot_force.norm() > cap * (1.0 + 1e-12)) {
    throw std::invalid_argument("pivot force exceeds its friction disk");
  }

  // Unit twist of a rotation about the pivot c: v(r) = omega * zhat x (r - c),
  // so the origin's planar velocity is omega * (c_y, -c_x).
  GeneralizedVelocity V{sense * piv.ry, -sense * piv.rx, sense * cfg.rho};
  const double vnorm = V.norm();
  V = {V.vx / vnorm, V.vy / vnorm, V.vz / vnorm};

  const double omega = V.vz / cfg.rho;
  double fx = pivot_force.x();
  double fy = pivot_force.y();
  double tau = piv.rx * pivot_force.y() - piv.ry * pivot_force.x();
  for (int i = 0; i < static_cast<int>(cfg.points.size()); ++i) {
    if (i == pivot_index) continue;
    const SupportPoint& p = cfg.points[i];
    const double vix = V.vx - omega * p.ry;
    const double viy = V.vy + omega * p.rx;
    const double speed = std::hypot(vix, viy);
    if (speed < kDegeneracyTol) {
      throw FacetDegeneracyError("two support points coincide with the pivot");
    }
    const double scale = cfg.mu * p.pressure / speed;
    const double fix = scale * vix;
    const double fiy = scale * viy;
    fx += fix;
    fy += fiy;
    tau += p.rx * fiy - p.ry * fix;
  }
  return {{fx, fy, tau / cfg.rho}, V};
}

DataPair sample_facet(const SupportConfig& cfg, int pivot_index, int sense, Rng& rng) {
  check_pivot(cfg, pivot_index, sense);
  const Eigen::Vector2d f = rng.disk(cfg.mu * cfg.points[pivot_index].pressure);
  return facet_load(cfg, pivot_index, sense, f);
}

namespace {

void recenter(SupportConfig& cfg) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : cfg.points) {
    cx += p.pressure * p.rx;
    cy += p.pressure * p.ry;
  }
  for (auto& p : cfg.points) {
    p.rx -= cx;
    p.ry -= cy;
  }
}

}  // namespace

SupportConfig gen_uniform_support(SupportKind kind, int n_points) {
  if (n_points < 3) throw std::invalid_argument("need at least 3 support points");
  SupportConfig cfg;
  if (kind == SupportKind::kRing) {
    cfg.kind = "ring";
    cfg.points.reserve(n_points);
    for (int k = 0; k < n_points; ++k) {
      const double th = 2.0 * M_PI * k / n_points;
      cfg.points.push_back({std::cos(th), std::sin(th), 1.0 / n_points});
    }
  } else {
    cfg.kind = "square";
    const int side = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_points)))));
    const int total = side * side;
    cfg.points.reserve(total);
    for (int i = 0; i < side; ++i) {
      for (int j = 0; j < side; ++j) {
        const double x = -1.0 + 2.0 * i / (side - 1);
        const double y = -1.0 + 2.0 * j / (side - 1);
        cfg.points.push_back({x, y, 1.0 / total});
      }
    }
  }
  recenter(cfg);
  return cfg;
}

SupportConfig gen_legged_support(Rng& rng) {
  SupportConfig cfg;
  cfg.kind = "legged";
  for (;;) {
    cfg.points.clear();
    for (int k = 0; k < 3; ++k) {
      const double th = rng.uniform(0.0, 2.0 * M_PI);
      cfg.points.push_back({std::cos(th), std::sin(th), 0.0});
    }
    double dmin = 1e300;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        dmin = std::min(dmin, std::hypot(cfg.points[i].rx - cfg.points[j].rx,
                                         cfg.points[i].ry - cfg.points[j].ry));
      }
    }
    if (dmin >= 1e-6) break;
  }
  double a = rng.uniform();
  double b = rng.uniform();
  if (a > b) std::swap(a, b);
  cfg.points[0].pressure = a;
  cfg.points[1].pressure = b - a;
  cfg.points[2].pressure = 1.0 - b;
  recenter(cfg);
  return cfg;
}

Dataset gen_dataset(const SupportConfig& cfg, Protocol protocol, int n, Rng& rng) {
  cfg.validate();
  if (n <= 0) throw std::invalid_argument("dataset size must be positive");
  Dataset ds;
  ds.meta.rho = cfg.rho;
  ds.meta.mu = cfg.mu;
  ds.meta.support = cfg;
  ds.pairs.reserve(n);

  int n_uniform = n;
  if (protocol == Protocol::kLegged) {
    if (cfg.points.size() != 3) {
      throw std::invalid_argument("legged protocol expects a 3-point support");
    }
    const int n_facet = n / 2;
    for (int k = 0; k < n_facet; ++k) {
      const int facet = k % 6;
      ds.pairs.push_back(sample_facet(cfg, facet / 2, facet % 2 == 0 ? 1 : -1, rng));
    }
    n_uniform = n - n_facet;
  }
  for (int k = 0; k < n_uniform; ++k) {
    const Eigen::Vector3d u = rng.unit_sphere();
    const GeneralizedVelocity V{u.x(), u.y(), u.z()};
    ds.pairs.push_back({load_for_twist(cfg, V), V});
  }
  return ds;
}

Dataset add_noise(const Dataset& ds, double sigma, Rng& rng) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw std::invalid_argument("noise sigma must be nonnegative");
  }
  if (sigma == 0.0) return ds;
  Dataset out = ds;
  out.meta.sigma = sigma;
  for (auto& pair : out.pairs) {
    pair.F.fx += sigma * rng.gaussian();
    pair.F.fy += sigma * rng.gaussian();
    pair.F.fz += sigma * rng.gaussian();
    for (;;) {
      const double vx = pair.V.vx + sigma * rng.gaussian();
      const double vy = pair.V.vy + sigma * rng.gaussian();
      const double vz = pair.V.vz + sigma * rng.gaussian();
      const double n = std::sqrt(vx * vx + vy * vy + vz * vz);
      if (n >= 1e-9) {
        pair.V = {vx / n, vy / n, vz / n};
        break;
      }
    }
  }
  return out;
}

SplitPlan split_dataset(const Dataset& ds, const SplitFractions& fractions,
                        const std::vector<int>& train_sizes, Rng& rng) {
  const int n = static_cast<int>(ds.pairs.size());
  const double fsum = fractions.test + fractions.validation + fractions.train_pool;
  if (fractions.test < 0.0 || fractions.validation < 0.0 || fractions.train_pool < 0.0 ||
      std::abs(fsum - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must be nonnegative and sum to one");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = std::min(i, static_cast<int>(rng.uniform() * (i + 1)));
    std::swap(order[i], order[j]);
  }
  const int n_test = static_cast<int>(std::lround(fractions.test * n));
  const int n_val = static_cast<int>(std::lround(fractions.validation * n));
  if (n_test + n_val > n) throw std::invalid_argument("split fractions leave no training pool");

  SplitPlan plan;
  plan.test.assign(order.begin(), order.begin() + n_test);
  plan.validation.assign(order.begin() + n_test, order.begin() + n_test + n_val);
  plan.pool.assign(order.begin() + n_test + n_val, order.end());
  for (int size : train_sizes) {
    if (size <= 0 || size > static_cast<int>(plan.pool.size())) {
      throw std::invalid_argument("train size exceeds the pool");
    }
    plan.train_sets.emplace_back(plan.pool.begin(), plan.pool.begin() + size);
  }
  return plan;
}

Dataset subset(const Dataset& ds, const std::vector<int>& indices) {
  Dataset out;
  out.meta = ds.meta;
  out.pairs.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= static_cast<int>(ds.pairs.size())) {
      throw std::out_of_range("subset index out of range");
    }
    out.pairs.push_back(ds.pairs[i]);
  }
  return out;
}

}  // namespace limitsurf
