#include "limitsurf/invert.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace limitsurf {
namespace {

double residual_objective(const PolyModel& model, const Eigen::Vector3d& F,
                          const Eigen::Vector3d& v) {
  return 0.5 * (gradient(model, GeneralizedLoad(F)) - v).squaredNorm();
}

}  // namespace

GeneralizedLoad invert(const PolyModel& model, const GeneralizedVelocity& V,
                       const InversionOptions& options) {
  model.validate();
  if (!model.certificate.has_value()) {
    throw std::invalid_argument("invert: model carries no convexity certificate");
  }
  if (options.max_iterations <= 0 || !(options.step_tolerance > 0.0) ||
      !(options.residual_tolerance > 0.0) || options.damping < 0.0) {
    throw std::invalid_argument("invert: bad options");
  }
  const Eigen::Vector3d v = V.vec();
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("invert: velocity direction must be unit length");
  }

  Eigen::Vector3d F = v;  // exact for the isotropic case, well-scaled otherwise
  double lam = options.damping;
  double res = (gradient(model, GeneralizedLoad(F)) - v).norm();
  for (int it = 0; it < options.max_iterations && res > options.residual_tolerance; ++it) {
    const Eigen::Vector3d r = gradient(model, GeneralizedLoad(F)) - v;
    const Eigen::Matrix3d H = hessian(model, GeneralizedLoad(F));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
      lam = std::max(lam, 1e-12 * std::max(lmax, 1.0));  // Levenberg fallback
    }

    const Eigen::Matrix3d Hd = H + lam * Eigen::Matrix3d::Identity();
    const Eigen::Vector3d step = -Hd.ldlt().solve(r);
    const double slope = (H * r).dot(step);
    if (!step.allFinite() || slope >= 0.0) {
      lam = lam == 0.0 ? 1e-8 * std::max(lmax, 1.0) : 10.0 * lam;
      continue;
    }

    const double g0 = 0.5 * r.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-12) {
      if (residual_objective(model, F + t * step, v) <= g0 + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      lam = lam == 0.0 ? 1e-8 * std::max(lmax, 1.0) : 10.0 * lam;
      continue;
    }
    F += t * step;
    lam *= 0.5;
    res = (gradient(model, GeneralizedLoad(F)) - v).norm();
    if (t * step.norm() <= options.step_tolerance) break;
  }
  if (res > options.residual_tolerance) {
    throw std::runtime_error("invert: no convergence in " +
                             std::to_string(options.max_iterations) +
                             " iterations; best residual " + std::to_string(res));
  }

  // The iteration fixes the gradient; homogeneity lets the level be fixed
  // afterwards without disturbing the gradient direction.
  const double level = evaluate(model, GeneralizedLoad(F));
  if (!(level > 0.0)) throw std::runtime_error("invert: level set degenerate at the solution");
  const Eigen::Vector3d scaled = F / std::pow(level, 1.0 / model.basis.degree);
  return GeneralizedLoad(scaled);
}

}  // namespace limitsurf
