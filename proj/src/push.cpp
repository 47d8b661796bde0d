#include "limitsurf/push.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace limitsurf {

void PushContact::validate() const {
  if (!p1.allFinite() || !p2.allFinite() || !normal.allFinite()) {
    throw std::invalid_argument("push contact is not finite");
  }
  if ((p1 - p2).norm() == 0.0) throw std::invalid_argument("push contact points coincide");
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("push contact normal must be unit length");
  }
  if (mu_contact < 0.0) throw std::invalid_argument("mu_contact must be nonnegative");
}

GeneralizedVelocity cor_to_twist(const COR& cor, double rho) {
  if (cor.sense != 1 && cor.sense != -1) throw std::invalid_argument("COR sense must be +1 or -1");
  if (!std::isfinite(cor.cx) || !std::isfinite(cor.cy)) {
    throw std::invalid_argument("COR must be finite");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const GeneralizedVelocity raw{cor.sense * cor.cy, -cor.sense * cor.cx,
                                static_cast<double>(cor.sense) * rho};
  return GeneralizedVelocity(raw.unit_direction());
}

GeneralizedVelocity translation_twist(double dx, double dy) {
  const double n = std::hypot(dx, dy);
  if (!(n > 0.0)) throw std::invalid_argument("translation direction must be nonzero");
  return {dx / n, dy / n, 0.0};
}

std::array<Eigen::Vector3d, 4> composite_cone(const PushContact& contact, double rho) {
  contact.validate();
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const Eigen::Vector2d t{-contact.normal.y(), contact.normal.x()};
  std::array<Eigen::Vector3d, 4> edges;
  int k = 0;
  for (const Eigen::Vector2d& p : {contact.p1, contact.p2}) {
    for (double side : {1.0, -1.0}) {
      const Eigen::Vector2d f = contact.normal + side * contact.mu_contact * t;
      edges[k++] = {f.x(), f.y(), (p.x() * f.y() - p.y() * f.x()) / rho};
    }
  }
  return edges;
}

double nnls_residual(const Eigen::Matrix<double, 3, Eigen::Dynamic>& W, const Eigen::Vector3d& f,
                     Eigen::VectorXd* lambda) {
  const int n = static_cast<int>(W.cols());
  if (n > 16) throw std::invalid_argument("nnls_residual: enumeration limited to 16 generators");
  double best = f.norm();  // empty support
  Eigen::VectorXd best_lambda = Eigen::VectorXd::Zero(n);
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) cols.push_back(j);
    }
    Eigen::MatrixXd Ws(3, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) Ws.col(j) = W.col(cols[j]);
    const Eigen::VectorXd sol = Ws.completeOrthogonalDecomposition().solve(f);
    if ((sol.array() < -1e-12).any()) continue;
    const double res = (Ws * sol - f).norm();
    if (res < best) {
      best = res;
      best_lambda.setZero();
      for (size_t j = 0; j < cols.size(); ++j) best_lambda(cols[j]) = std::max(sol(j), 0.0);
    }
  }
  if (lambda) *lambda = best_lambda;
  return best;
}

StableResult is_stable_push_twist(const PolyModel& model, const PushContact& contact,
                                  const GeneralizedVelocity& V) {
  const GeneralizedLoad F = invert(model, GeneralizedVelocity(V.unit_direction()));
  const Eigen::Vector3d fhat = F.vec() / F.norm();

  const auto edges = composite_cone(contact, model.rho);
  Eigen::Matrix<double, 3, Eigen::Dynamic> W(3, 4);
  for (int j = 0; j < 4; ++j) W.col(j) = edges[j];

  StableResult out;
  out.required_load = F;
  out.margin = nnls_residual(W, fhat);
  out.stable = out.margin <= 1e-6;
  return out;
}

StableResult is_stable_push(const PolyModel& model, const PushContact& contact, const COR& cor) {
  return is_stable_push_twist(model, contact, cor_to_twist(cor, model.rho));
}

}  // namespace limitsurf
