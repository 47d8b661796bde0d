#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "limitsurf/wrench.hpp"

namespace limitsurf {

// Ordered monomial basis for homogeneous trivariate polynomials of even
// degree d. Ordering is graded lexicographic on the exponent triples
// (descending in i1, then i2), stable across runs; for d=4 the basis has
// 15 monomials, for d=2 it has 6.
struct MonomialBasis {
  int degree = 0;
  std::vector<Eigen::Vector3i> exponents;

  static MonomialBasis make(int degree);
  int size() const { return static_cast<int>(exponents.size()); }
  bool operator==(const MonomialBasis& other) const {
    return degree == other.degree && exponents == other.exponents;
  }
};

// Even-degree homogeneous polynomial H(F; a) = sum_i a_i F^{e_i} with an
// optional convexity certificate: the 9x9 Gram matrix for degree 4, or the
// 3x3 coefficient matrix A for degree 2. load_scale maps loads on the
// 1-level set to the magnitude of the data the model was fitted on.
struct PolyModel {
  MonomialBasis basis;
  Eigen::VectorXd coeffs;
  std::optional<Eigen::MatrixXd> certificate;
  double epsilon = 0.0;
  double load_scale = 1.0;
  double rho = 1.0;

  void validate() const;
};

// Values of every basis monomial at F (length m vector h, H = h.dot(a)).
Eigen::VectorXd monomial_values(const MonomialBasis& basis, const Eigen::Vector3d& F);

// Gradients of every basis monomial at F (3 x m matrix G, grad H = G a).
Eigen::MatrixXd monomial_gradients(const MonomialBasis& basis, const Eigen::Vector3d& F);

// Per-monomial Hessian quadratic forms: vector c with c_i = z^T Hess(F^{e_i}) z,
// so z^T Hess(H) z = c.dot(a).
Eigen::VectorXd monomial_hessian_quadform(const MonomialBasis& basis, const Eigen::Vector3d& F,
                                          const Eigen::Vector3d& z);

double evaluate(const PolyModel& model, const GeneralizedLoad& F);
Eigen::Vector3d gradient(const PolyModel& model, const GeneralizedLoad& F);
Eigen::Matrix3d hessian(const PolyModel& model, const GeneralizedLoad& F);

// Normalized gradient: the predicted twist direction for a load F. Invariant
// to positive scaling of F. Errors when the gradient vanishes.
Eigen::Vector3d predict_velocity_direction(const PolyModel& model, const GeneralizedLoad& F);

// Degree-2 coefficient vector for H(F) = F^T A F over the canonical basis.
Eigen::VectorXd quad_coeffs_from_matrix(const Eigen::Matrix3d& A);
// Inverse of the above.
Eigen::Matrix3d quad_matrix_from_coeffs(const Eigen::VectorXd& coeffs);

PolyModel make_model(int degree, const Eigen::VectorXd& coeffs, double rho = 1.0);
PolyModel make_quadratic_model(const Eigen::Matrix3d& A, double rho = 1.0);

}  // namespace limitsurf
