#include "limitsurf/identify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "limitsurf/metrics.hpp"

namespace limitsurf {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Dataset scale_loads(const Dataset& ds, double factor) {
  Dataset out = ds;
  for (auto& pair : out.pairs) pair.F = pair.F * factor;
  return out;
}

// One grid candidate solved end to end: objective, solve, load_scale.
struct Candidate {
  PolyModel model;
  SolveResult diagnostics;
  bool solved = false;
  std::string status;
};

Candidate solve_candidate(const Dataset& train_scaled, double load_norm_scale,
                          const MonomialBasis& basis, const FitConfig& config, double eta1,
                          double eta2) {
  Candidate out;
  const QuadraticObjective obj = assemble_objective(train_scaled, basis, eta1, eta2);
  SolveOptions sopts = config.solver;
  sopts.epsilon = config.epsilon;

  Eigen::VectorXd a;
  switch (config.kind) {
    case ModelKind::kPoly4Cvx: {
      static const SosConstraintSystem system = build_constraints(4);
      out.diagnostics = solve_sdp(obj, system, sopts);
      if (!out.diagnostics.converged) {
        out.status = out.diagnostics.status;
        return out;
      }
      a = out.diagnostics.coeffs;
      out.model = make_model(4, a);
      out.model.certificate = out.diagnostics.gram;
      out.model.epsilon = config.epsilon;
      break;
    }
    case ModelKind::kPoly4: {
      a = solve_unconstrained(obj);
      out.model = make_model(4, a);
      break;
    }
    case ModelKind::kQuad: {
      out.diagnostics = solve_quadratic_psd(obj, sopts);
      if (!out.diagnostics.converged) {
        out.status = out.diagnostics.status;
        return out;
      }
      a = out.diagnostics.coeffs;
      out.model = make_quadratic_model(quad_matrix_from_coeffs(a));
      out.model.epsilon = config.epsilon;
      break;
    }
  }

  // load_scale: the median of H(F_i / load_scale) over training loads is one.
  // H is homogeneous, so the median level r of the internally scaled loads
  // rescales with r^(1/d).
  std::vector<double> levels;
  levels.reserve(train_scaled.pairs.size());
  for (const auto& pair : train_scaled.pairs) levels.push_back(evaluate(out.model, pair.F));
  const double r = median(levels);
  out.model.load_scale = r > 0.0 ? load_norm_scale * std::pow(r, 1.0 / out.model.basis.degree)
                                 : load_norm_scale;  // degenerate fit; best effort
  out.model.rho = train_scaled.meta.rho;
  out.solved = true;
  out.status = "ok";
  return out;
}

}  // namespace

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPoly4Cvx: return "poly4-cvx";
    case ModelKind::kPoly4: return "poly4";
    case ModelKind::kQuad: return "quad";
  }
  throw std::invalid_argument("unknown model kind");
}

ModelKind kind_from_name(const std::string& name) {
  if (name == "poly4-cvx") return ModelKind::kPoly4Cvx;
  if (name == "poly4") return ModelKind::kPoly4;
  if (name == "quad") return ModelKind::kQuad;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::vector<std::pair<double, double>> FitConfig::default_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double e1 : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    for (double e2 : {0.1, 1.0, 10.0, 100.0, 1000.0}) grid.emplace_back(e1, e2);
  }
  return grid;
}

QuadraticObjective assemble_objective(const Dataset& train, const MonomialBasis& basis,
                                      double eta1, double eta2) {
  if (train.pairs.empty()) throw std::invalid_argument("assemble_objective: empty training set");
  if (eta1 < 0.0 || eta2 < 0.0) throw std::invalid_argument("eta weights must be nonnegative");
  const int m = basis.size();
  QuadraticObjective obj;
  obj.P = Eigen::MatrixXd::Identity(m, m);  // ||a||^2 regularizer
  obj.q = Eigen::VectorXd::Zero(m);
  obj.c0 = 0.0;
  for (const auto& pair : train.pairs) {
    const Eigen::Vector3d v = pair.V.vec();
    if (std::abs(v.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("assemble_objective: velocities must be unit length");
    }
    const Eigen::Vector3d F = pair.F.vec();
    if (eta1 > 0.0) {
      const Eigen::MatrixXd G = monomial_gradients(basis, F);
      const Eigen::MatrixXd PG = G - v * (v.transpose() * G);  // (I - v v^T) G
      obj.P += eta1 * PG.transpose() * PG;
    }
    if (eta2 > 0.0) {
      const Eigen::VectorXd h = monomial_values(basis, F);
      obj.P += eta2 * h * h.transpose();
      obj.q += eta2 * h;
      obj.c0 += eta2;
    }
  }
  return obj;
}

FitResult fit(const Dataset& train, const Dataset& validation, const FitConfig& config) {
  if (train.pairs.empty()) throw std::invalid_argument("fit: empty training set");
  const MonomialBasis basis = MonomialBasis::make(config.kind == ModelKind::kQuad ? 2 : 4);

  // Internal normalization: conditioning of the quartic monomials and the
  // meaning of epsilon should not depend on the sensor's load units.
  std::vector<double> norms;
  norms.reserve(train.pairs.size());
  for (const auto& pair : train.pairs) norms.push_back(pair.F.norm());
  const double s = median(norms);
  if (!(s > 0.0)) throw std::invalid_argument("fit: training loads are all zero");
  const Dataset train_scaled = scale_loads(train, 1.0 / s);

  std::vector<std::pair<double, double>> candidates = config.cv_grid;
  if (candidates.empty()) candidates.emplace_back(config.eta1, config.eta2);
  if (candidates.size() > 1 && validation.pairs.empty()) {
    throw std::invalid_argument("fit: cross-validation needs a validation split");
  }

  FitResult result;
  result.kind = config.kind;
  bool have_best = false;
  double best_deg = 0.0;
  for (const auto& [e1, e2] : candidates) {
    Candidate cand = solve_candidate(train_scaled, s, basis, config, e1, e2);
    CandidateRecord rec;
    rec.eta1 = e1;
    rec.eta2 = e2;
    rec.solved = cand.solved;
    rec.status = cand.status;
    if (cand.solved) {
      const double deg = validation.pairs.empty()
                             ? angular_error(cand.model, train).mean_degrees
                             : angular_error(cand.model, validation).mean_degrees;
      rec.validation_degrees = deg;
      if (!have_best || deg < best_deg) {
        have_best = true;
        best_deg = deg;
        result.model = cand.model;
        result.diagnostics = cand.diagnostics;
        result.eta1 = e1;
        result.eta2 = e2;
        result.validation_degrees = deg;
      }
    }
    result.candidates.push_back(rec);
  }
  if (!have_best) {
    std::string detail;
    for (const auto& rec : result.candidates) detail += " " + rec.status;
    throw std::runtime_error("fit: no grid candidate converged:" + detail);
  }
  result.train_degrees = angular_error(result.model, train).mean_degrees;
  return result;
}

std::map<ModelKind, FitResult> cross_validate(const Dataset& train, const Dataset& validation,
                                              const std::vector<ModelKind>& kinds,
                                              const std::vector<std::pair<double, double>>& grid,
                                              double epsilon) {
  std::map<ModelKind, FitResult> out;
  for (ModelKind kind : kinds) {
    FitConfig config;
    config.kind = kind;
    config.epsilon = epsilon;
    config.cv_grid = grid;
    out.emplace(kind, fit(train, validation, config));
  }
  return out;
}

}  // namespace limitsurf
