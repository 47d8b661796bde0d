#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limitsurf/identify.hpp"
#include "limitsurf/invert.hpp"
#include "limitsurf/io.hpp"
#include "limitsurf/metrics.hpp"
#include "limitsurf/push.hpp"
#include "limitsurf/sliding.hpp"
#include "limitsurf/study.hpp"

namespace {

using namespace limitsurf;

std::vector<double> parse_csv_numbers(const std::string& text, size_t expected,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  if (out.size() != expected) {
    throw std::invalid_argument(what + " expects " + std::to_string(expected) +
                                " comma-separated numbers, got '" + text + "'");
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
  return out;
}

Protocol protocol_for_support(const std::string& support) {
  return support == "legged" ? Protocol::kLegged : Protocol::kUniform;
}

void add_gen(CLI::App& app) {
  auto* cmd = app.add_subcommand("gen", "Generate an oracle dataset");
  auto support = std::make_shared<std::string>("legged");
  auto points = std::make_shared<int>(360);
  auto n = std::make_shared<int>(150);
  auto noise = std::make_shared<double>(0.0);
  auto mu = std::make_shared<double>(1.0);
  auto rho = std::make_shared<double>(1.0);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--support", *support, "legged | ring | square")
      ->check(CLI::IsMember({"legged", "ring", "square"}));
  cmd->add_option("--points", *points, "ring/square support size");
  cmd->add_option("--n", *n, "number of pairs");
  cmd->add_option("--noise", *noise, "Gaussian sigma on F and V");
  cmd->add_option("--mu", *mu, "support friction coefficient");
  cmd->add_option("--rho", *rho, "characteristic length");
  cmd->add_option("--seed", *seed, "RNG seed");
  cmd->add_option("-o,--out", *out, "output path (.csv or directory)")->required();
  cmd->callback([=]() {
    Rng rng(*seed);
    SupportConfig cfg;
    if (*support == "legged") {
      cfg = gen_legged_support(rng);
    } else {
      cfg = gen_uniform_support(*support == "ring" ? SupportKind::kRing : SupportKind::kSquare,
                                *points);
    }
    cfg.mu = *mu;
    cfg.rho = *rho;
    Dataset ds = gen_dataset(cfg, protocol_for_support(*support), *n, rng);
    ds = add_noise(ds, *noise, rng);
    ds.meta.seed = *seed;
    write_dataset(*out, ds);
    const auto [csv, meta] = dataset_paths(*out);
    std::cout << "wrote " << ds.pairs.size() << " pairs to " << csv << " (+ " << meta << ")\n";
  });
}

void add_fit(CLI::App& app) {
  auto* cmd = app.add_subcommand("fit", "Fit a limit-surface model");
  auto kind = std::make_shared<std::string>("poly4-cvx");
  auto train_path = std::make_shared<std::string>();
  auto val_path = std::make_shared<std::string>();
  auto eta1 = std::make_shared<double>(-1.0);
  auto eta2 = std::make_shared<double>(-1.0);
  auto epsilon = std::make_shared<double>(1e-4);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--kind", *kind, "poly4-cvx | poly4 | quad")
      ->check(CLI::IsMember({"poly4-cvx", "poly4", "quad"}));
  cmd->add_option("--train", *train_path, "training dataset CSV")->required();
  cmd->add_option("--val", *val_path, "validation dataset CSV (enables the CV grid)");
  cmd->add_option("--eta1", *eta1, "direction weight (with --eta2: single candidate)");
  cmd->add_option("--eta2", *eta2, "level-set weight");
  cmd->add_option("--epsilon", *epsilon, "Gram eigenvalue floor");
  cmd->add_option("-o,--out", *out, "output model JSON")->required();
  cmd->callback([=]() {
    const Dataset train = read_dataset(*train_path);
    Dataset validation;
    if (!val_path->empty()) validation = read_dataset(*val_path);
    FitConfig fc;
    fc.kind = kind_from_name(*kind);
    fc.epsilon = *epsilon;
    if (*eta1 >= 0.0 && *eta2 >= 0.0) {
      fc.cv_grid = {{*eta1, *eta2}};
    } else {
      fc.cv_grid = FitConfig::default_grid();
    }
    const FitResult res = fit(train, validation, fc);
    write_model(*out, res.model);
    std::printf("kind=%s eta1=%g eta2=%g train=%.4f deg validation=%.4f deg -> %s\n",
                kind_name(res.kind).c_str(), res.eta1, res.eta2, res.train_degrees,
                res.validation_degrees, out->c_str());
  });
}

void add_eval(CLI::App& app) {
  auto* cmd = app.add_subcommand("eval", "Angular error of a model on a dataset");
  auto model_path = std::make_shared<std::string>();
  auto data_path = std::make_shared<std::string>();
  cmd->add_option("--model", *model_path, "model JSON")->required();
  cmd->add_option("--data", *data_path, "dataset CSV")->required();
  cmd->callback([=]() {
    const PolyModel model = read_model(*model_path);
    const Dataset ds = read_dataset(*data_path);
    const AngularError err = angular_error(model, ds);
    std::printf("delta_degrees=%.17g undefined=%d n=%zu\n", err.mean_degrees,
                err.undefined_predictions, ds.pairs.size());
  });
}

void add_invert(CLI::App& app) {
  auto* cmd = app.add_subcommand("invert", "Map twist directions to loads on the 1-level set");
  auto model_path = std::make_shared<std::string>();
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--model", *model_path, "model JSON")->required();
  cmd->add_option("--input", *input, "velocity CSV (vx,vy,vz)")->required();
  cmd->add_option("-o,--out", *out, "output load CSV")->required();
  cmd->callback([=]() {
    const PolyModel model = read_model(*model_path);
    std::vector<GeneralizedLoad> loads;
    for (const GeneralizedVelocity& v : read_velocities(*input)) {
      loads.push_back(invert(model, GeneralizedVelocity(v.unit_direction())));
    }
    write_loads(*out, loads);
    std::cout << "wrote " << loads.size() << " loads to " << *out << "\n";
  });
}

void add_stable(CLI::App& app) {
  auto* cmd = app.add_subcommand("stable", "Classify stable pushes over a COR grid");
  auto model_path = std::make_shared<std::string>();
  auto p1 = std::make_shared<std::string>("-0.025,-0.05");
  auto p2 = std::make_shared<std::string>("0.025,-0.05");
  auto normal = std::make_shared<std::string>("0,1");
  auto mu_contact = std::make_shared<double>(1.0);
  auto half_width = std::make_shared<double>(0.2);
  auto grid_n = std::make_shared<int>(8);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--model", *model_path, "model JSON")->required();
  cmd->add_option("--p1", *p1, "first contact point 'x,y'");
  cmd->add_option("--p2", *p2, "second contact point 'x,y'");
  cmd->add_option("--normal", *normal, "inward normal 'x,y'");
  cmd->add_option("--mu-contact", *mu_contact, "pusher friction coefficient");
  cmd->add_option("--half-width", *half_width, "COR grid half width (m)");
  cmd->add_option("--grid-n", *grid_n, "COR grid side count");
  cmd->add_option("-o,--out", *out, "output CSV")->required();
  cmd->callback([=]() {
    const PolyModel model = read_model(*model_path);
    const auto a = parse_csv_numbers(*p1, 2, "--p1");
    const auto b = parse_csv_numbers(*p2, 2, "--p2");
    const auto nn = parse_csv_numbers(*normal, 2, "--normal");
    PushContact contact;
    contact.p1 = {a[0], a[1]};
    contact.p2 = {b[0], b[1]};
    contact.normal = Eigen::Vector2d(nn[0], nn[1]).normalized();
    contact.mu_contact = *mu_contact;
    if (*grid_n < 1) throw std::invalid_argument("--grid-n must be positive");
    std::vector<StableRow> rows;
    for (int i = 0; i < *grid_n; ++i) {
      for (int j = 0; j < *grid_n; ++j) {
        const double cx =
            *grid_n == 1 ? 0.0 : -*half_width + 2.0 * *half_width * i / (*grid_n - 1);
        const double cy =
            *grid_n == 1 ? 0.0 : -*half_width + 2.0 * *half_width * j / (*grid_n - 1);
        for (int sense : {1, -1}) {
          const StableResult r = is_stable_push(model, contact, COR{cx, cy, sense});
          rows.push_back({cx, cy, sense, r.stable, r.margin});
        }
      }
    }
    write_stable_rows(*out, rows);
    std::cout << "wrote " << rows.size() << " classifications to " << *out << "\n";
  });
}

void add_simulate(CLI::App& app) {
  auto* cmd = app.add_subcommand("simulate", "Free-sliding trajectory under the fitted model");
  auto model_path = std::make_shared<std::string>();
  auto mass = std::make_shared<double>(1.0);
  auto inertia = std::make_shared<double>(-1.0);
  auto mu = std::make_shared<double>(0.3);
  auto gravity = std::make_shared<double>(9.81);
  auto v0 = std::make_shared<std::string>("0.2,0,0");
  auto pose = std::make_shared<std::string>("0,0,0");
  auto step = std::make_shared<double>(1e-3);
  auto v_stop = std::make_shared<double>(0.0);
  auto max_time = std::make_shared<double>(300.0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--model", *model_path, "model JSON")->required();
  cmd->add_option("--mass", *mass, "mass (kg)");
  cmd->add_option("--inertia", *inertia, "I_z (kg m^2); default mass*rho^2");
  cmd->add_option("--mu", *mu, "support friction coefficient");
  cmd->add_option("--gravity", *gravity, "m/s^2");
  cmd->add_option("--v0", *v0, "initial twist 'vx,vy,omega'");
  cmd->add_option("--pose", *pose, "initial pose 'x,y,theta'");
  cmd->add_option("--step", *step, "RK4 step (s)");
  cmd->add_option("--v-stop", *v_stop, "rest threshold; 0 means 1e-4*|V0|");
  cmd->add_option("--max-time", *max_time, "simulation cap (s)");
  cmd->add_option("-o,--out", *out, "output trajectory CSV")->required();
  cmd->callback([=]() {
    const PolyModel model = read_model(*model_path);
    BodyParams body;
    body.mass = *mass;
    body.rho = model.rho;
    body.inertia_z = *inertia > 0.0 ? *inertia : *mass * model.rho * model.rho;
    body.mu_support = *mu;
    body.gravity = *gravity;
    const auto v = parse_csv_numbers(*v0, 3, "--v0");
    const auto p = parse_csv_numbers(*pose, 3, "--pose");
    SlideState initial;
    initial.pose = {p[0], p[1], p[2]};
    initial.twist = embed_twist(v[0], v[1], v[2], model.rho);
    SimOptions opts;
    opts.step = *step;
    opts.v_stop = *v_stop;
    opts.max_time = *max_time;
    const Trajectory traj = simulate_sliding(model, body, initial, opts);
    write_trajectory(*out, traj, model.rho);
    std::printf("%zu samples, %s at t=%.4f s -> %s\n", traj.states.size(),
                traj.reached_rest ? "rest" : "no rest", traj.states.back().time, out->c_str());
  });
}

void add_study(CLI::App& app) {
  auto* cmd = app.add_subcommand("study", "Run the identification study");
  auto cfg = std::make_shared<StudyConfig>();
  auto sizes = std::make_shared<std::string>("7,15,22,45");
  auto kinds = std::make_shared<std::string>("poly4-cvx,poly4,quad");
  auto out = std::make_shared<std::string>();
  cmd->add_option("--support", cfg->protocol, "legged | ring | square")
      ->check(CLI::IsMember({"legged", "ring", "square"}));
  cmd->add_option("--trials", cfg->n_trials, "number of trials");
  cmd->add_option("--n", cfg->dataset_size, "dataset size per trial");
  cmd->add_option("--sigma", cfg->sigma, "train/validation noise");
  cmd->add_option("--seed", cfg->master_seed, "master seed");
  cmd->add_option("--train-sizes", *sizes, "comma list");
  cmd->add_option("--points", cfg->uniform_points, "ring/square support size");
  cmd->add_option("--epsilon", cfg->epsilon, "base Gram eigenvalue floor");
  cmd->add_option("--floor-eps", cfg->floor_epsilon,
                  "poly4-cvx small-sample floor at the reference size (0 disables)");
  cmd->add_option("--floor-ref", cfg->floor_ref_size, "train size where the floor starts");
  cmd->add_option("--floor-half-life", cfg->floor_half_life,
                  "train-size increase that halves the floor");
  cmd->add_option("--jobs", cfg->jobs, "worker threads (never affects results)");
  cmd->add_option("--kinds", *kinds, "comma list of model kinds");
  cmd->add_option("-o,--out", *out, "report JSON")->required();
  cmd->callback([=]() {
    cfg->train_sizes = parse_int_list(*sizes);
    cfg->kinds.clear();
    std::stringstream ss(*kinds);
    std::string cell;
    while (std::getline(ss, cell, ',')) cfg->kinds.push_back(kind_from_name(cell));
    const StudyReport report = run_study(*cfg);
    write_study_report(*out, report);
    for (const auto& c : report.cells) {
      std::printf("%-10s n=%-3d mean=%8.4f deg ci=%7.4f failures=%d\n",
                  kind_name(c.kind).c_str(), c.train_size, c.mean_degrees, c.ci_half_width,
                  c.failures);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex polynomial limit-surface toolkit"};
  app.require_subcommand(1);
  add_gen(app);
  add_fit(app);
  add_eval(app);
  add_invert(app);
  add_stable(app);
  add_simulate(app);
  add_study(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, help exits 0
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
