#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "limitsurf/sos.hpp"

namespace limitsurf {

// f(a) = a^T P a - 2 q^T a + c0 with P positive definite (every fitting
// objective here includes a ||a||^2 term, so P >= I holds by construction).
struct QuadraticObjective {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  double c0 = 0.0;

  double value(const Eigen::VectorXd& a) const {
    return a.dot(P * a) - 2.0 * q.dot(a) + c0;
  }
};

struct SolveOptions {
  double epsilon = 1e-4;         // Gram eigenvalue floor
  double barrier_initial = 1.0;  // first barrier weight mu
  double barrier_shrink = 0.2;   // mu multiplier per stage
  double gap_tolerance = 1e-7;   // stop once cone_dim * mu falls below this
  int max_stages = 40;
  int max_newton_iterations = 80;
  double newton_tolerance = 1e-9;  // on half the squared Newton decrement
  double armijo_slope = 0.3;
  double backtrack = 0.5;
};

struct StageDiagnostics {
  double mu = 0.0;
  double objective = 0.0;  // f(a) at the stage end, barrier excluded
  int newton_iterations = 0;
};

struct SolveResult {
  Eigen::VectorXd coeffs;
  Eigen::MatrixXd gram;  // certificate matrix, lambda_min > epsilon
  bool converged = false;
  double objective = 0.0;
  double gap_bound = 0.0;  // cone_dim * final mu
  int total_newton_iterations = 0;
  std::vector<StageDiagnostics> stages;
  std::string status;
};

// Minimizes f over coefficient vectors whose Hessian admits a Gram matrix
// with lambda_min >= epsilon. Interior-point method: the coupled (a, Q)
// variables are reduced to the null space of the linear Gram constraints and
// a log-det barrier on Q - epsilon I is driven to the requested gap.
SolveResult solve_sdp(const QuadraticObjective& objective, const SosConstraintSystem& system,
                      const SolveOptions& options);

// Degree-2 variant: the certificate is the coefficient matrix A itself,
// constrained to A >= epsilon I. Same barrier scheme in the 6 coefficients.
SolveResult solve_quadratic_psd(const QuadraticObjective& objective, const SolveOptions& options);

// Plain normal-equations solve of f, no convexity constraint.
Eigen::VectorXd solve_unconstrained(const QuadraticObjective& objective);

}  // namespace limitsurf
