#include "limitsurf/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace limitsurf {
namespace {

// Power tables px[k] = x^k for k = 0..degree. Negative exponents never occur;
// entries below derivative order are guarded by the coefficient being zero.
void fill_powers(double x, int degree, double* px) {
  px[0] = 1.0;
  for (int k = 1; k <= degree; ++k) px[k] = px[k - 1] * x;
}

double safe_pow(const double* px, int k) { return k < 0 ? 0.0 : px[k]; }

}  // namespace

MonomialBasis MonomialBasis::make(int degree) {
  if (degree < 2 || degree % 2 != 0)
    throw std::invalid_argument("MonomialBasis: degree must be a positive even integer");
  MonomialBasis basis;
  basis.degree = degree;
  for (int i1 = degree; i1 >= 0; --i1)
    for (int i2 = degree - i1; i2 >= 0; --i2)
      basis.exponents.emplace_back(i1, i2, degree - i1 - i2);
  return basis;
}

void PolyModel::validate() const {
  if (basis.degree < 2 || basis.degree % 2 != 0)
    throw std::invalid_argument("PolyModel: degree must be a positive even integer");
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("PolyModel: coefficient count does not match basis");
  if (!coeffs.allFinite()) throw std::invalid_argument("PolyModel: coefficients must be finite");
  if (!(load_scale > 0.0)) throw std::invalid_argument("PolyModel: load_scale must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("PolyModel: rho must be > 0");
  if (certificate) {
    const auto& Q = *certificate;
    const int expected = basis.degree == 2 ? 3 : 9;
    if (Q.rows() != expected || Q.cols() != expected)
      throw std::invalid_argument("PolyModel: certificate has wrong dimensions");
  }
}

Eigen::VectorXd monomial_values(const MonomialBasis& basis, const Eigen::Vector3d& F) {
  const int d = basis.degree;
  double px[16], py[16], pz[16];
  fill_powers(F.x(), d, px);
  fill_powers(F.y(), d, py);
  fill_powers(F.z(), d, pz);
  Eigen::VectorXd h(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.exponents[i];
    h[i] = px[e[0]] * py[e[1]] * pz[e[2]];
  }
  return h;
}

Eigen::MatrixXd monomial_gradients(const MonomialBasis& basis, const Eigen::Vector3d& F) {
  const int d = basis.degree;
  double px[16], py[16], pz[16];
  fill_powers(F.x(), d, px);
  fill_powers(F.y(), d, py);
  fill_powers(F.z(), d, pz);
  Eigen::MatrixXd G(3, basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.exponents[i];
    G(0, i) = e[0] * safe_pow(px, e[0] - 1) * py[e[1]] * pz[e[2]];
    G(1, i) = e[1] * px[e[0]] * safe_pow(py, e[1] - 1) * pz[e[2]];
    G(2, i) = e[2] * px[e[0]] * py[e[1]] * safe_pow(pz, e[2] - 1);
  }
  return G;
}

Eigen::VectorXd monomial_hessian_quadform(const MonomialBasis& basis, const Eigen::Vector3d& F,
                                          const Eigen::Vector3d& z) {
  const int d = basis.degree;
  double px[16], py[16], pz[16];
  fill_powers(F.x(), d, px);
  fill_powers(F.y(), d, py);
  fill_powers(F.z(), d, pz);
  Eigen::VectorXd c(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.exponents[i];
    const double hxx = e[0] * (e[0] - 1) * safe_pow(px, e[0] - 2) * py[e[1]] * pz[e[2]];
    const double hyy = e[1] * (e[1] - 1) * px[e[0]] * safe_pow(py, e[1] - 2) * pz[e[2]];
    const double hzz = e[2] * (e[2] - 1) * px[e[0]] * py[e[1]] * safe_pow(pz, e[2] - 2);
    const double hxy = e[0] * e[1] * safe_pow(px, e[0] - 1) * safe_pow(py, e[1] - 1) * pz[e[2]];
    const double hxz = e[0] * e[2] * safe_pow(px, e[0] - 1) * py[e[1]] * safe_pow(pz, e[2] - 1);
    const double hyz = e[1] * e[2] * px[e[0]] * safe_pow(py, e[1] - 1) * safe_pow(pz, e[2] - 1);
    c[i] = z.x() * z.x() * hxx + z.y() * z.y() * hyy + z.z() * z.z() * hzz +
           2.0 * (z.x() * z.y() * hxy + z.x() * z.z() * hxz + z.y() * z.z() * hyz);
  }
  return c;
}

double evaluate(const PolyModel& model, const GeneralizedLoad& F) {
  return monomial_values(model.basis, F.vec()).dot(model.coeffs);
}

Eigen::Vector3d gradient(const PolyModel& model, const GeneralizedLoad& F) {
  return monomial_gradients(model.basis, F.vec()) * model.coeffs;
}

Eigen::Matrix3d hessian(const PolyModel& model, const GeneralizedLoad& F) {
  const int d = model.basis.degree;
  double px[16], py[16], pz[16];
  fill_powers(F.fx, d, px);
  fill_powers(F.fy, d, py);
  fill_powers(F.fz, d, pz);
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  for (int i = 0; i < model.basis.size(); ++i) {
    const auto& e = model.basis.exponents[i];
    const double a = model.coeffs[i];
    if (a == 0.0) continue;
    H(0, 0) += a * e[0] * (e[0] - 1) * safe_pow(px, e[0] - 2) * py[e[1]] * pz[e[2]];
    H(1, 1) += a * e[1] * (e[1] - 1) * px[e[0]] * safe_pow(py, e[1] - 2) * pz[e[2]];
    H(2, 2) += a * e[2] * (e[2] - 1) * px[e[0]] * py[e[1]] * safe_pow(pz, e[2] - 2);
    H(0, 1) += a * e[0] * e[1] * safe_pow(px, e[0] - 1) * safe_pow(py, e[1] - 1) * pz[e[2]];
    H(0, 2) += a * e[0] * e[2] * safe_pow(px, e[0] - 1) * py[e[1]] * safe_pow(pz, e[2] - 1);
    H(1, 2) += a * e[1] * e[2] * px[e[0]] * safe_pow(py, e[1] - 1) * safe_pow(pz, e[2] - 1);
  }
  H(1, 0) = H(0, 1);
  H(2, 0) = H(0, 2);
  H(2, 1) = H(1, 2);
  return H;
}

Eigen::Vector3d predict_velocity_direction(const PolyModel& model, const GeneralizedLoad& F) {
  const Eigen::Vector3d g = gradient(model, F);
  const double n = g.norm();
  if (n < 1e-300)
    throw std::domain_error("predict_velocity_direction: gradient vanishes at this load");
  return g / n;
}

Eigen::VectorXd quad_coeffs_from_matrix(const Eigen::Matrix3d& A) {
  // Basis order for d=2: (2,0,0),(1,1,0),(1,0,1),(0,2,0),(0,1,1),(0,0,2)
  Eigen::VectorXd a(6);
  a << A(0, 0), A(0, 1) + A(1, 0), A(0, 2) + A(2, 0), A(1, 1), A(1, 2) + A(2, 1), A(2, 2);
  return a;
}

Eigen::Matrix3d quad_matrix_from_coeffs(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != 6)
    throw std::invalid_argument("quad_matrix_from_coeffs: expected 6 coefficients");
  Eigen::Matrix3d A;
  A << coeffs[0], 0.5 * coeffs[1], 0.5 * coeffs[2],  //
      0.5 * coeffs[1], coeffs[3], 0.5 * coeffs[4],   //
      0.5 * coeffs[2], 0.5 * coeffs[4], coeffs[5];
  return A;
}

PolyModel make_model(int degree, const Eigen::VectorXd& coeffs, double rho) {
  PolyModel m;
  m.basis = MonomialBasis::make(degree);
  m.coeffs = coeffs;
  m.rho = rho;
  m.validate();
  return m;
}

PolyModel make_quadratic_model(const Eigen::Matrix3d& A, double rho) {
  PolyModel m = make_model(2, quad_coeffs_from_matrix(A), rho);
  m.certificate = Eigen::MatrixXd(A);
  return m;
}

}  // namespace limitsurf
