#include "limitsurf/sos.hpp"

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

namespace limitsurf {
namespace {

// Unordered-pair index over {0,1,2}: (0,0)=0 (0,1)=1 (0,2)=2 (1,1)=3 (1,2)=4 (2,2)=5
int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  static constexpr int table[3][3] = {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}};
  return table[i][j];
}

// Degree-2 exponent triple -> unordered F-pair index.
int fpair_of_exponent(const Eigen::Vector3i& e) {
  int idx[2], n = 0;
  for (int v = 0; v < 3; ++v)
    for (int r = 0; r < e[v]; ++r) idx[n++] = v;
  return pair_index(idx[0], idx[1]);
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

Eigen::Matrix<double, 9, 1> kron_vector(const Eigen::Vector3d& F, const Eigen::Vector3d& z) {
  Eigen::Matrix<double, 9, 1> y;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) y[3 * j + l] = z[j] * F[l];
  return y;
}

SosConstraintSystem build_constraints(int degree) {
  if (degree != 4)
    throw std::invalid_argument(
        "build_constraints: only degree 4 is supported (degree 2 uses the direct PSD route)");

  const MonomialBasis basis = MonomialBasis::make(degree);
  const int m = basis.size();
  constexpr int kGram = 9;
  constexpr int kMonomials = 36;  // 6 z-pairs x 6 F-pairs

  // Left side: z^T Hess(H) z. Accumulate, for every ordered (j,l), the second
  // partial of each basis monomial into the matching (z-pair, F-pair) slot.
  std::vector<Eigen::VectorXd> b(kMonomials, Eigen::VectorXd::Zero(m));
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      for (int i = 0; i < m; ++i) {
        Eigen::Vector3i e = basis.exponents[i];
        const int cj = e[j];
        e[j] -= 1;
        const int cl = e[l];
        e[l] -= 1;
        const int coeff = cj * cl;
        if (coeff == 0) continue;
        b[6 * pair_index(j, l) + fpair_of_exponent(e)][i] += coeff;
      }
    }
  }

  // Right side: y^T Q y. Every ordered pair of composite indices (j,p),(l,q)
  // lands in exactly one monomial slot.
  std::vector<Eigen::MatrixXd> A(kMonomials, Eigen::MatrixXd::Zero(kGram, kGram));
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int l = 0; l < 3; ++l)
        for (int q = 0; q < 3; ++q)
          A[6 * pair_index(j, l) + pair_index(p, q)](3 * j + p, 3 * l + q) += 1.0;

  // Row-reduce the stacked system over (svec(Q), a) to an independent set.
  // svec packs the diagonal plus the strict lower triangle; off-diagonal
  // functional entries pick up the factor 2 from symmetry.
  const int svec_dim = kGram * (kGram + 1) / 2;
  Eigen::MatrixXd rows(kMonomials, svec_dim + m);
  for (int k = 0; k < kMonomials; ++k) {
    int col = 0;
    for (int u = 0; u < kGram; ++u)
      for (int v = 0; v <= u; ++v) rows(k, col++) = (u == v ? 1.0 : 2.0) * A[k](u, v);
    rows.row(k).tail(m) = -b[k].transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep(qr.colsPermutation().indices().data(),
                        qr.colsPermutation().indices().data() + rank);
  std::sort(keep.begin(), keep.end());

  SosConstraintSystem sys;
  sys.degree = degree;
  sys.gram_dim = kGram;
  sys.num_coeffs = m;
  for (int k : keep) {
    sys.indicator_matrices.push_back(A[k]);
    sys.coefficient_vectors.push_back(b[k]);
    const double positions = A[k].sum();  // ordered contributions: 1, 2, or 4
    if (positions > 2.5)
      ++sys.two_position_count;
    else
      ++sys.single_position_count;
  }
  return sys;
}

Eigen::MatrixXd canonical_gram(const MonomialBasis& basis, const Eigen::VectorXd& a) {
  if (basis.degree != 4) throw std::invalid_argument("canonical_gram: degree must be 4");
  if (a.size() != basis.size()) throw std::invalid_argument("canonical_gram: bad coefficient size");

  // Fully symmetric tensor T of the quartic: each monomial coefficient is
  // spread evenly over the orderings of its index multiset.
  std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3> T{};
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.exponents[i];
    const double t = a[i] * factorial(e[0]) * factorial(e[1]) * factorial(e[2]) / 24.0;
    int idx[4], n = 0;
    for (int v = 0; v < 3; ++v)
      for (int r = 0; r < e[v]; ++r) idx[n++] = v;
    std::sort(idx, idx + 4);
    do {
      T[idx[0]][idx[1]][idx[2]][idx[3]] = t;
    } while (std::next_permutation(idx, idx + 4));
  }

  Eigen::MatrixXd Q(9, 9);
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int l = 0; l < 3; ++l)
        for (int q = 0; q < 3; ++q) Q(3 * j + p, 3 * l + q) = 12.0 * T[j][l][p][q];
  return Q;
}

std::vector<Eigen::MatrixXd> gram_gauge_basis() {
  std::vector<Eigen::MatrixXd> dirs;
  for (int j = 0; j < 3; ++j)
    for (int l = j + 1; l < 3; ++l)
      for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q) {
          Eigen::MatrixXd D = Eigen::MatrixXd::Zero(9, 9);
          D(3 * j + p, 3 * l + q) = 1.0;
          D(3 * l + q, 3 * j + p) = 1.0;
          D(3 * j + q, 3 * l + p) = -1.0;
          D(3 * l + p, 3 * j + q) = -1.0;
          dirs.push_back(D);
        }
  return dirs;
}

CertificateReport verify_certificate(const SosConstraintSystem& sys, const Eigen::VectorXd& a,
                                     const Eigen::MatrixXd& Q, double epsilon, int n_samples,
                                     Rng& rng) {
  if (Q.rows() != sys.gram_dim || Q.cols() != sys.gram_dim)
    throw std::invalid_argument("verify_certificate: Gram matrix has wrong dimensions");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("verify_certificate: Gram matrix must be symmetric");

  CertificateReport report;
  for (int k = 0; k < sys.independent_count(); ++k) {
    report.max_constraint_residual =
        std::max(report.max_constraint_residual, std::abs(sys.constraint_value(k, Q, a)));
  }
  report.constraints_ok = report.max_constraint_residual <= 1e-8;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.psd_ok = report.min_eigenvalue >= epsilon - 1e-9;

  const MonomialBasis basis = MonomialBasis::make(sys.degree);
  report.identity_ok = true;
  for (int s = 0; s < n_samples; ++s) {
    const Eigen::Vector3d F = rng.unit_sphere() * rng.uniform(0.5, 2.0);
    const Eigen::Vector3d z = rng.unit_sphere() * rng.uniform(0.5, 2.0);
    const double lhs = monomial_hessian_quadform(basis, F, z).dot(a);
    const auto y = kron_vector(F, z);
    const double rhs = y.dot(Q * y);
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    report.max_identity_error = std::max(report.max_identity_error, err);
    if (err > 1e-8) report.identity_ok = false;
  }

  report.pass = report.constraints_ok && report.psd_ok && report.identity_ok;
  return report;
}

}  // namespace limitsurf
