#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "limitsurf/poly.hpp"
#include "limitsurf/solver.hpp"
#include "limitsurf/support.hpp"

namespace limitsurf {

enum class ModelKind { kPoly4Cvx, kPoly4, kQuad };

std::string kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);

struct FitConfig {
  ModelKind kind = ModelKind::kPoly4Cvx;
  double eta1 = 1.0;  // direction-residual weight, used when cv_grid is empty
  double eta2 = 1.0;  // level-set weight
  double epsilon = 1e-4;
  std::vector<std::pair<double, double>> cv_grid;  // (eta1, eta2) candidates
  SolveOptions solver;

  // Crossed log grid {0.1 .. 1e3}^2; 25 candidates. Weights below 0.1 leave
  // the fit regularizer-dominated and are never competitive.
  static std::vector<std::pair<double, double>> default_grid();
};

struct CandidateRecord {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double validation_degrees = 0.0;
  bool solved = false;
  std::string status;
};

struct FitResult {
  PolyModel model;
  ModelKind kind = ModelKind::kPoly4Cvx;
  double eta1 = 0.0;  // selected
  double eta2 = 0.0;
  double train_degrees = 0.0;
  double validation_degrees = 0.0;
  std::vector<CandidateRecord> candidates;
  SolveResult diagnostics;  // of the selected solve (empty for poly4)
};

// Quadratic form of the fitting objective
//   ||a||^2 + sum_i (eta1 * ||(I - V_i V_i^T) grad H(F_i; a)||^2
//             + eta2 * (H(F_i; a) - 1)^2)
// over the given monomial basis. Every V_i must be unit length.
QuadraticObjective assemble_objective(const Dataset& train, const MonomialBasis& basis,
                                      double eta1, double eta2);

// Fits one model kind. Loads are normalized internally by their median norm
// before assembling the objective; the returned model's load_scale is set so
// the median of H(F_i / load_scale) over training loads equals one. When
// cv_grid is non-empty, each candidate is solved and the one with the lowest
// validation angular error wins (ties to the earlier grid entry).
FitResult fit(const Dataset& train, const Dataset& validation, const FitConfig& config);

// One fit per kind over a shared grid and shared splits.
std::map<ModelKind, FitResult> cross_validate(const Dataset& train, const Dataset& validation,
                                              const std::vector<ModelKind>& kinds,
                                              const std::vector<std::pair<double, double>>& grid,
                                              double epsilon = 1e-4);

}  // namespace limitsurf
