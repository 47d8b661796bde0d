#include "limitsurf/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace limitsurf {
namespace {

// Common shape of both convex programs: x collects the free scalars, the
// objective reads f(x) = x^T P x - 2 q^T x + c0, the cone matrix is the
// affine map M(x) = M0 + sum_k x_k D_k, and feasible x live on the column
// span of N (orthonormal). The barrier stage minimizes
//   phi(y) = f(N y) - mu * logdet M(N y).
struct BarrierProblem {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  double c0 = 0.0;
  Eigen::MatrixXd N;
  Eigen::MatrixXd M0;
  std::vector<std::pair<int, Eigen::MatrixXd>> D;  // (x index, dM/dx_k)
  int cone_dim = 0;
};

Eigen::MatrixXd cone_matrix(const BarrierProblem& pb, const Eigen::VectorXd& x) {
  Eigen::MatrixXd M = pb.M0;
  for (const auto& [k, Dk] : pb.D) M += x(k) * Dk;
  return M;
}

// phi(y), or +inf outside the cone.
double barrier_value(const BarrierProblem& pb, double mu, const Eigen::VectorXd& y) {
  const Eigen::VectorXd x = pb.N * y;
  const Eigen::MatrixXd M = cone_matrix(pb, x);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  double logdet = 0.0;
  for (int i = 0; i < pb.cone_dim; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  const double f = x.dot(pb.P * x) - 2.0 * pb.q.dot(x) + pb.c0;
  return f - mu * logdet;
}

struct StageOutcome {
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on phi at fixed mu. y is updated in place and stays strictly
// feasible (the line search rejects any step that leaves the cone).
StageOutcome newton_stage(const BarrierProblem& pb, double mu, const SolveOptions& opts,
                          Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  const int nd = static_cast<int>(pb.D.size());
  StageOutcome out;
  for (int it = 0; it < opts.max_newton_iterations; ++it) {
    const Eigen::VectorXd x = pb.N * y;
    const Eigen::MatrixXd M = cone_matrix(pb, x);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("barrier iterate left the cone");
    }
    const Eigen::MatrixXd W =
        llt.solve(Eigen::MatrixXd::Identity(pb.cone_dim, pb.cone_dim));

    Eigen::VectorXd gx = 2.0 * (pb.P * x - pb.q);
    std::vector<Eigen::MatrixXd> U(nd);
    for (int k = 0; k < nd; ++k) {
      U[k] = W * pb.D[k].second;
      gx(pb.D[k].first) -= mu * U[k].trace();
    }
    Eigen::MatrixXd Hx = 2.0 * pb.P;
    for (int k = 0; k < nd; ++k) {
      for (int l = k; l < nd; ++l) {
        // Tr(W D_k W D_l) = Tr(U_k U_l)
        const double h = mu * (U[k].transpose().cwiseProduct(U[l])).sum();
        Hx(pb.D[k].first, pb.D[l].first) += h;
        if (l != k) Hx(pb.D[l].first, pb.D[k].first) += h;
      }
    }

    const Eigen::VectorXd gy = pb.N.transpose() * gx;
    Eigen::MatrixXd Hy = pb.N.transpose() * Hx * pb.N;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Hy);
    Eigen::VectorXd step = -ldlt.solve(gy);
    double slope = gy.dot(step);
    if (ldlt.info() != Eigen::Success || !std::isfinite(slope) || slope > 0.0) {
      // Convexity should make this unreachable; regularize and retry once.
      Hy += 1e-10 * Hy.norm() * Eigen::MatrixXd::Identity(n, n);
      step = -Hy.ldlt().solve(gy);
      slope = gy.dot(step);
      if (!std::isfinite(slope) || slope > 0.0) break;
    }

    out.iterations = it + 1;
    if (-0.5 * slope <= opts.newton_tolerance) {
      out.converged = true;
      return out;
    }

    const double phi0 = barrier_value(pb, mu, y);
    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-14) {
      const Eigen::VectorXd trial = y + t * step;
      if (barrier_value(pb, mu, trial) <= phi0 + opts.armijo_slope * t * slope) {
        y = trial;
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) break;
  }
  return out;
}

SolveResult run_barrier(const BarrierProblem& pb, const SolveOptions& opts, Eigen::VectorXd y) {
  SolveResult res;
  // The first stage must actually center the iterate, so mu starts at the
  // objective's scale; a weak first barrier sends Newton crawling along the
  // cone boundary instead.
  const Eigen::VectorXd x_start = pb.N * y;
  const double f_start =
      x_start.dot(pb.P * x_start) - 2.0 * pb.q.dot(x_start) + pb.c0;
  double mu = opts.barrier_initial * std::max(1.0, std::abs(f_start) / pb.cone_dim);
  bool gap_reached = false;
  bool last_converged = false;
  for (int stage = 0; stage < opts.max_stages; ++stage) {
    const StageOutcome out = newton_stage(pb, mu, opts, y);
    const Eigen::VectorXd x = pb.N * y;
    const double f = x.dot(pb.P * x) - 2.0 * pb.q.dot(x) + pb.c0;
    res.stages.push_back({mu, f, out.iterations});
    res.total_newton_iterations += out.iterations;
    last_converged = out.converged;
    if (pb.cone_dim * mu <= opts.gap_tolerance) {
      gap_reached = true;
      break;
    }
    mu *= opts.barrier_shrink;
  }
  const Eigen::VectorXd x = pb.N * y;
  res.coeffs = x;  // caller slices
  res.objective = x.dot(pb.P * x) - 2.0 * pb.q.dot(x) + pb.c0;
  res.gap_bound = pb.cone_dim * mu;
  res.converged = gap_reached && last_converged;
  res.status = res.converged ? "optimal" : (gap_reached ? "stalled" : "max_stages");
  return res;
}

// Coefficients of (F . F)^(d/2) in the given basis; its canonical Gram is
// well inside the cone, which makes it the strictly feasible seed.
Eigen::VectorXd sphere_coeffs(const MonomialBasis& basis) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(basis.size());
  const int half = basis.degree / 2;
  double half_fact = 1.0;
  for (int i = 2; i <= half; ++i) half_fact *= i;
  for (int i = 0; i < basis.size(); ++i) {
    const Eigen::Vector3i e = basis.exponents[i];
    if (e.x() % 2 || e.y() % 2 || e.z() % 2) continue;
    double denom = 1.0;
    for (int c = 0; c < 3; ++c) {
      for (int v = 2; v <= e(c) / 2; ++v) denom *= v;
    }
    a(i) = half_fact / denom;
  }
  return a;
}

}  // namespace

SolveResult solve_sdp(const QuadraticObjective& objective, const SosConstraintSystem& system,
                      const SolveOptions& options) {
  if (system.degree != 4) throw std::invalid_argument("solve_sdp expects the degree-4 system");
  const int m = system.num_coeffs;
  const int g = system.gram_dim;
  if (objective.P.rows() != m || objective.P.cols() != m || objective.q.size() != m) {
    throw std::invalid_argument("objective size does not match the coefficient basis");
  }
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  // Lower-triangle parameterization of Q, column major.
  std::vector<std::pair<int, int>> tri;
  for (int j = 0; j < g; ++j) {
    for (int i = j; i < g; ++i) tri.emplace_back(i, j);
  }
  const int nt = static_cast<int>(tri.size());
  const int xdim = m + nt;

  // C x = 0 encodes Tr(A_k Q) - b_k . a = 0 over x = (a, tril(Q)).
  const int kc = system.independent_count();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(kc, xdim);
  for (int k = 0; k < kc; ++k) {
    C.row(k).head(m) = -system.coefficient_vectors[k].transpose();
    const Eigen::MatrixXd& A = system.indicator_matrices[k];
    for (int t = 0; t < nt; ++t) {
      const auto [i, j] = tri[t];
      C(k, m + t) = (i == j) ? A(i, i) : A(i, j) + A(j, i);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  int rank = 0;
  const double smax = svd.singularValues()(0);
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-12 * smax) ++rank;
  }
  if (rank != kc) throw std::runtime_error("Gram constraint system lost rank");

  BarrierProblem pb;
  pb.N = svd.matrixV().rightCols(xdim - rank);
  pb.P = Eigen::MatrixXd::Zero(xdim, xdim);
  pb.P.topLeftCorner(m, m) = objective.P;
  pb.q = Eigen::VectorXd::Zero(xdim);
  pb.q.head(m) = objective.q;
  pb.c0 = objective.c0;
  pb.cone_dim = g;
  pb.M0 = -options.epsilon * Eigen::MatrixXd::Identity(g, g);
  pb.D.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const auto [i, j] = tri[t];
    Eigen::MatrixXd Dk = Eigen::MatrixXd::Zero(g, g);
    Dk(i, j) = 1.0;
    Dk(j, i) = 1.0;
    pb.D.emplace_back(m + t, Dk);
  }

  const MonomialBasis basis = MonomialBasis::make(system.degree);
  const Eigen::VectorXd a0 = 0.5 * options.epsilon * sphere_coeffs(basis);
  // Gram of (F . F)^2 shifted along the gauge to be definite: 4I + 8uu^T with
  // u the Kronecker diagonal (the canonical Gram is only semidefinite).
  Eigen::MatrixXd Q0 = 4.0 * Eigen::MatrixXd::Identity(g, g);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) Q0(4 * a, 4 * b) += 8.0;
  }
  Q0 *= 0.5 * options.epsilon;
  Eigen::VectorXd x0(xdim);
  x0.head(m) = a0;
  for (int t = 0; t < nt; ++t) x0(m + t) = Q0(tri[t].first, tri[t].second);
  const Eigen::VectorXd y0 = pb.N.transpose() * x0;  // x0 satisfies C x0 = 0

  SolveResult res = run_barrier(pb, options, y0);
  const Eigen::VectorXd x = res.coeffs;
  res.coeffs = x.head(m);
  res.gram = Eigen::MatrixXd::Zero(g, g);
  for (int t = 0; t < nt; ++t) {
    res.gram(tri[t].first, tri[t].second) = x(m + t);
    res.gram(tri[t].second, tri[t].first) = x(m + t);
  }

  // Slack-cone polish. The objective only involves a, and every a is reachable
  // on the constraint manifold, so if the unconstrained minimizer admits a
  // Gram matrix inside the cone it is the exact optimum. Transplanting the
  // barrier solution's gauge offset onto the unconstrained coefficients gives
  // the witness; the offset solves the homogeneous constraints, so the
  // polished pair satisfies C x = 0 by construction.
  const Eigen::VectorXd a_free = solve_unconstrained(objective);
  const Eigen::MatrixXd Q_free =
      canonical_gram(basis, a_free) + (res.gram - canonical_gram(basis, res.coeffs));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q_free, Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= options.epsilon) {
    res.coeffs = a_free;
    res.gram = Q_free;
    res.gap_bound = 0.0;
    res.converged = true;
    res.status = "optimal";
  }

  res.objective = objective.value(res.coeffs);
  return res;
}

SolveResult solve_quadratic_psd(const QuadraticObjective& objective, const SolveOptions& options) {
  const int m = 6;
  if (objective.P.rows() != m || objective.P.cols() != m || objective.q.size() != m) {
    throw std::invalid_argument("objective size does not match the quadratic basis");
  }
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  BarrierProblem pb;
  pb.P = objective.P;
  pb.q = objective.q;
  pb.c0 = objective.c0;
  pb.N = Eigen::MatrixXd::Identity(m, m);
  pb.cone_dim = 3;
  pb.M0 = -options.epsilon * Eigen::Matrix3d::Identity();
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e(k) = 1.0;
    pb.D.emplace_back(k, quad_matrix_from_coeffs(e));
  }

  const Eigen::VectorXd y0 =
      quad_coeffs_from_matrix(2.0 * options.epsilon * Eigen::Matrix3d::Identity());
  SolveResult res = run_barrier(pb, options, y0);
  res.gram = quad_matrix_from_coeffs(res.coeffs);

  // Same slack-cone polish as the quartic path; here the coefficient matrix
  // itself is the certificate.
  const Eigen::VectorXd a_free = solve_unconstrained(objective);
  const Eigen::Matrix3d A_free = quad_matrix_from_coeffs(a_free);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A_free, Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= options.epsilon) {
    res.coeffs = a_free;
    res.gram = A_free;
    res.gap_bound = 0.0;
    res.converged = true;
    res.status = "optimal";
  }

  res.objective = objective.value(res.coeffs);
  return res;
}

Eigen::VectorXd solve_unconstrained(const QuadraticObjective& objective) {
  Eigen::LLT<Eigen::MatrixXd> llt(objective.P);
  if (llt.info() == Eigen::Success) return llt.solve(objective.q);
  return objective.P.ldlt().solve(objective.q);
}

}  // namespace limitsurf
