#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "limitsurf/identify.hpp"
#include "limitsurf/support.hpp"

namespace limitsurf {

// Full evaluation protocol: repeated trials of generate / split / corrupt /
// fit / score, aggregated with 95% confidence half-widths.
struct StudyConfig {
  std::string protocol = "legged";  // legged | ring | square
  int n_trials = 50;
  int dataset_size = 150;
  SplitFractions fractions;
  std::vector<int> train_sizes = {7, 15, 22, 45};
  double sigma = 0.1;
  std::vector<ModelKind> kinds = {ModelKind::kPoly4Cvx, ModelKind::kPoly4, ModelKind::kQuad};
  std::uint64_t master_seed = 1;
  int uniform_points = 360;  // ring / square support size
  double epsilon = 1e-4;
  std::vector<std::pair<double, double>> cv_grid = FitConfig::default_grid();
  int jobs = 1;  // worker threads; never affects results

  // Small-sample curvature floor for poly4-cvx. At train size n the fit runs
  // with epsilon max(epsilon, floor_epsilon * 2^-((n - floor_ref_size) /
  // floor_half_life)): a strong convexity prior stands in for the data the
  // small fits do not have and decays to the base epsilon as samples
  // accumulate. The other kinds always use the base epsilon; set
  // floor_epsilon to zero to disable the schedule.
  double floor_epsilon = 2.0;
  int floor_ref_size = 7;
  double floor_half_life = 2.5;

  double scheduled_epsilon(int train_size) const;

  void validate() const;
};

struct StudyCell {
  ModelKind kind = ModelKind::kPoly4Cvx;
  int train_size = 0;
  std::vector<double> trial_degrees;  // successful trials, in trial order
  int failures = 0;
  double mean_degrees = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sd / sqrt(n)
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyCell> cells;  // kind-major, then train size

  const StudyCell& cell(ModelKind kind, int train_size) const;
};

// Per trial: a fresh legged support (or the fixed uniform one), a 150-pair
// oracle dataset, a shuffled split, Gaussian corruption of train+validation
// (test stays clean), one fit per (kind, train size) sharing the splits, and
// the hold-out angular error. Trial t draws from Rng::stream(master_seed, t),
// so the worker count never changes the report.
StudyReport run_study(const StudyConfig& config);

}  // namespace limitsurf
