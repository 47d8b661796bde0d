#include "limitsurf/study.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "limitsurf/metrics.hpp"

namespace limitsurf {

double StudyConfig::scheduled_epsilon(int train_size) const {
  const double decay = (train_size - floor_ref_size) / floor_half_life;
  return std::max(epsilon, floor_epsilon * std::pow(2.0, -decay));
}

void StudyConfig::validate() const {
  if (protocol != "legged" && protocol != "ring" && protocol != "square") {
    throw std::invalid_argument("study protocol must be legged, ring or square");
  }
  if (n_trials <= 0 || dataset_size <= 0) {
    throw std::invalid_argument("study needs positive trial and dataset counts");
  }
  if (train_sizes.empty() || kinds.empty()) {
    throw std::invalid_argument("study needs train sizes and model kinds");
  }
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  if (floor_epsilon < 0.0 || !(floor_half_life > 0.0)) {
    throw std::invalid_argument("floor schedule needs floor_epsilon >= 0 and a positive half life");
  }
  if (uniform_points < 3) throw std::invalid_argument("uniform support needs >= 3 points");
  if (jobs <= 0) throw std::invalid_argument("jobs must be positive");
  const double fsum = fractions.test + fractions.validation + fractions.train_pool;
  if (std::abs(fsum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to one");
}

const StudyCell& StudyReport::cell(ModelKind kind, int train_size) const {
  for (const auto& c : cells) {
    if (c.kind == kind && c.train_size == train_size) return c;
  }
  throw std::out_of_range("no such study cell");
}

namespace {

struct TrialResult {
  // [kind index][size index]; empty optional records a failed fit.
  std::vector<std::vector<std::optional<double>>> degrees;
};

TrialResult run_trial(const StudyConfig& cfg, const SupportConfig& fixed_support, int trial) {
  Rng rng = Rng::stream(cfg.master_seed, static_cast<std::uint64_t>(trial));
  const bool legged = cfg.protocol == "legged";
  const SupportConfig support = legged ? gen_legged_support(rng) : fixed_support;
  const Dataset clean = gen_dataset(support, legged ? Protocol::kLegged : Protocol::kUniform,
                                    cfg.dataset_size, rng);
  const SplitPlan plan = split_dataset(clean, cfg.fractions, cfg.train_sizes, rng);
  const Dataset noisy = add_noise(clean, cfg.sigma, rng);
  const Dataset validation = subset(noisy, plan.validation);
  const Dataset test = subset(clean, plan.test);

  TrialResult out;
  out.degrees.resize(cfg.kinds.size());
  for (size_t ki = 0; ki < cfg.kinds.size(); ++ki) {
    out.degrees[ki].resize(cfg.train_sizes.size());
    for (size_t si = 0; si < cfg.train_sizes.size(); ++si) {
      FitConfig fc;
      fc.kind = cfg.kinds[ki];
      fc.epsilon = fc.kind == ModelKind::kPoly4Cvx ? cfg.scheduled_epsilon(cfg.train_sizes[si])
                                                   : cfg.epsilon;
      fc.cv_grid = cfg.cv_grid;
      try {
        const FitResult fr = fit(subset(noisy, plan.train_sets[si]), validation, fc);
        out.degrees[ki][si] = angular_error(fr.model, test).mean_degrees;
      } catch (const std::exception&) {
        out.degrees[ki][si] = std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  SupportConfig fixed_support;
  if (config.protocol == "ring") {
    fixed_support = gen_uniform_support(SupportKind::kRing, config.uniform_points);
  } else if (config.protocol == "square") {
    fixed_support = gen_uniform_support(SupportKind::kSquare, config.uniform_points);
  }

  std::vector<TrialResult> trials(config.n_trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= config.n_trials) return;
      trials[t] = run_trial(config, fixed_support, t);
    }
  };
  const int n_workers = std::min(config.jobs, config.n_trials);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  StudyReport report;
  report.config = config;
  for (size_t ki = 0; ki < config.kinds.size(); ++ki) {
    for (size_t si = 0; si < config.train_sizes.size(); ++si) {
      StudyCell cell;
      cell.kind = config.kinds[ki];
      cell.train_size = config.train_sizes[si];
      for (int t = 0; t < config.n_trials; ++t) {
        const auto& d = trials[t].degrees[ki][si];
        if (d.has_value()) {
          cell.trial_degrees.push_back(*d);
        } else {
          ++cell.failures;
        }
      }
      const size_t n = cell.trial_degrees.size();
      if (n > 0) {
        double sum = 0.0;
        for (double d : cell.trial_degrees) sum += d;
        cell.mean_degrees = sum / static_cast<double>(n);
        if (n > 1) {
          double ss = 0.0;
          for (double d : cell.trial_degrees) ss += (d - cell.mean_degrees) * (d - cell.mean_degrees);
          const double sd = std::sqrt(ss / static_cast<double>(n - 1));
          cell.ci_half_width = 1.96 * sd / std::sqrt(static_cast<double>(n));
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace limitsurf
