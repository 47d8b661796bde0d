#pragma once

#include <vector>

#include <Eigen/Core>

#include "limitsurf/poly.hpp"
#include "limitsurf/rng.hpp"

namespace limitsurf {

// Linear system tying polynomial coefficients a to a Gram matrix Q so that
//   z^T Hess(H(F; a)) z == y(F,z)^T Q y(F,z),  y = (z1 Fx, z1 Fy, ..., z3 Fz),
// holds identically. One equation Tr(A_k Q) = b_k^T a per distinct monomial
// of the bidegree-(2,2) expansion, reduced to an independent set.
struct SosConstraintSystem {
  int degree = 4;
  int gram_dim = 9;
  int num_coeffs = 15;  // m

  std::vector<Eigen::MatrixXd> indicator_matrices;   // A_k, gram_dim x gram_dim
  std::vector<Eigen::VectorXd> coefficient_vectors;  // b_k, length m

  // Equations that pin a single Gram position vs. equations tying two
  // positions together (the latter carry the Gram gauge freedom).
  int single_position_count = 0;
  int two_position_count = 0;

  int independent_count() const { return static_cast<int>(indicator_matrices.size()); }

  double constraint_value(int k, const Eigen::MatrixXd& Q, const Eigen::VectorXd& a) const {
    return (indicator_matrices[k].cwiseProduct(Q)).sum() - coefficient_vectors[k].dot(a);
  }
};

// Symbolic expansion of both sides of the Gram identity for the given even
// degree (only degree 4 is supported; degree 2 uses the direct PSD route in
// the solver). Duplicate/dependent equations are removed by rank-revealing
// reduction with pivot tolerance 1e-12.
SosConstraintSystem build_constraints(int degree);

// Gram matrix of H(F; a) induced by its fully symmetric coefficient tensor:
// Q[(j,p),(l,q)] = 12 T_{jlpq}. Satisfies every constraint of the system
// exactly (up to rounding) for any a.
Eigen::MatrixXd canonical_gram(const MonomialBasis& basis, const Eigen::VectorXd& a);

// Orthogonal complement directions of the Gram parameterization: the 9
// symmetric matrices D with y^T D y == 0 identically. Adding any combination
// to a valid Gram matrix preserves the identity.
std::vector<Eigen::MatrixXd> gram_gauge_basis();

// y(F, z) in the z-major, F-minor ordering used throughout.
Eigen::Matrix<double, 9, 1> kron_vector(const Eigen::Vector3d& F, const Eigen::Vector3d& z);

struct CertificateReport {
  bool pass = false;
  bool constraints_ok = false;
  bool psd_ok = false;
  bool identity_ok = false;
  double max_constraint_residual = 0.0;
  double min_eigenvalue = 0.0;
  double max_identity_error = 0.0;  // relative, over the sampled points
};

// Checks (i) the linear constraints to 1e-8, (ii) lambda_min(Q) >= eps - 1e-9,
// (iii) the Gram identity at n_samples random (F, z) pairs to 1e-8 relative.
CertificateReport verify_certificate(const SosConstraintSystem& sys, const Eigen::VectorXd& a,
                                     const Eigen::MatrixXd& Q, double epsilon, int n_samples,
                                     Rng& rng);

}  // namespace limitsurf
