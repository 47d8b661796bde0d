// Acceptance gate: one self-contained check per shipped guarantee, one
// PASS/FAIL line each. Exit code is the number of failed checks.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "limitsurf/identify.hpp"
#include "limitsurf/invert.hpp"
#include "limitsurf/io.hpp"
#include "limitsurf/metrics.hpp"
#include "limitsurf/push.hpp"
#include "limitsurf/sliding.hpp"
#include "limitsurf/solver.hpp"
#include "limitsurf/sos.hpp"
#include "limitsurf/study.hpp"
#include "limitsurf/support.hpp"
#include "oracles.hpp"

using namespace limitsurf;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double angle_rad(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::max(-1.0, std::min(1.0, a.normalized().dot(b.normalized())));
  return std::acos(c);
}

const SosConstraintSystem& quartic_system() {
  static const SosConstraintSystem sys = build_constraints(4);
  return sys;
}

PolyModel fit_simple(const Dataset& ds, ModelKind kind, double epsilon) {
  FitConfig config;
  config.kind = kind;
  config.eta1 = 100.0;
  config.eta2 = 100.0;
  config.epsilon = epsilon;
  return fit(ds, Dataset{}, config).model;
}

double min_eig(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. The degree-4 constraint system makes the Gram identity hold for any
// coefficient vector paired with any gauge-shifted canonical Gram matrix.
bool check_certificate_system(std::string& label) {
  const auto t0 = Clock::now();
  const SosConstraintSystem& sys = quartic_system();
  const MonomialBasis basis = MonomialBasis::make(4);
  const std::vector<Eigen::MatrixXd> gauge = gram_gauge_basis();
  bool counts_ok = sys.independent_count() == 36 && sys.single_position_count == 27 &&
                   sys.two_position_count == 9 && gauge.size() == 9;

  Rng rng(101);
  double max_rel = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd a(15);
    for (int i = 0; i < 15; ++i) a(i) = rng.gaussian();
    Eigen::MatrixXd Q = canonical_gram(basis, a);
    for (const auto& G : gauge) Q += rng.gaussian() * G;
    for (int p = 0; p < 100; ++p) {
      const Eigen::Vector3d F = rng.unit_sphere() * rng.uniform(0.5, 2.0);
      const Eigen::Vector3d z = rng.unit_sphere() * rng.uniform(0.5, 2.0);
      const double lhs = monomial_hessian_quadform(basis, F, z).dot(a);
      const auto y = kron_vector(F, z);
      const double rhs = y.dot(Q * y);
      max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  const double dt = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "Gram identity on 1000 random certificate pairs, max rel err %.1e; "
                "36 independent constraints = 27 entry pins + 9 symmetric ties (%.1fs)",
                max_rel, dt);
  label = buf;
  return counts_ok && max_rel <= 1e-8 && dt < 10.0;
}

// 2. Analytic gradient and Hessian against central finite differences.
bool check_calculus(std::string& label) {
  Rng rng(102);
  double grad_rel = 0.0, hess_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(15);
    for (int i = 0; i < 15; ++i) a(i) = rng.gaussian();
    const PolyModel model = make_model(4, a);
    const Eigen::Vector3d F = rng.unit_sphere() * rng.uniform(0.5, 2.0);
    const Eigen::Vector3d g = gradient(model, GeneralizedLoad(F));
    const Eigen::Vector3d g_fd = oracle::fd_gradient(model, F);
    grad_rel = std::max(grad_rel, (g - g_fd).norm() / std::max(1.0, g_fd.norm()));
    const Eigen::Matrix3d H = hessian(model, GeneralizedLoad(F));
    const Eigen::Matrix3d H_fd = oracle::fd_hessian(model, F);
    hess_rel = std::max(hess_rel, (H - H_fd).norm() / std::max(1.0, H_fd.norm()));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "finite-difference calculus check, gradient rel %.1e, Hessian rel %.1e", grad_rel,
                hess_rel);
  label = buf;
  return grad_rel <= 1e-6 && hess_rel <= 1e-5;
}

// 3. Every constrained fit carries a verifiable curvature certificate.
bool check_certified_fits(std::string& label) {
  label = "certificates verified on 4 quartic and 3 quadratic fits "
          "(constraints, eigenvalue floor, sampled curvature)";
  Rng rng(103);
  const SupportConfig legged_a = gen_legged_support(rng);
  const Dataset ds_legged_small = gen_dataset(legged_a, Protocol::kLegged, 10, rng);
  const SupportConfig legged_b = gen_legged_support(rng);
  const Dataset ds_legged = gen_dataset(legged_b, Protocol::kLegged, 30, rng);
  const SupportConfig ring = gen_uniform_support(SupportKind::kRing, 360);
  const Dataset ds_ring = gen_dataset(ring, Protocol::kUniform, 20, rng);
  Dataset ds_ring_noisy = gen_dataset(ring, Protocol::kUniform, 7, rng);
  ds_ring_noisy = add_noise(ds_ring_noisy, 0.1, rng);

  bool ok = true;
  const std::vector<std::pair<const Dataset*, double>> quartic_cases = {
      {&ds_legged_small, 0.5}, {&ds_legged, 1e-4}, {&ds_ring, 1e-4}, {&ds_ring_noisy, 2.0}};
  for (const auto& [ds, eps] : quartic_cases) {
    const PolyModel model = fit_simple(*ds, ModelKind::kPoly4Cvx, eps);
    if (!model.certificate.has_value()) return false;
    const CertificateReport rep =
        verify_certificate(quartic_system(), model.coeffs, *model.certificate, eps, 100, rng);
    ok = ok && rep.pass;
    for (int s = 0; s < 200; ++s) {
      const Eigen::Vector3d F = rng.unit_sphere() * rng.uniform(0.5, 2.0);
      const Eigen::Vector3d z = rng.unit_sphere() * rng.uniform(0.5, 2.0);
      const double curvature = z.dot(hessian(model, GeneralizedLoad(F)) * z);
      ok = ok && curvature >= eps * z.squaredNorm() * F.squaredNorm() - 1e-8;
    }
  }
  const std::vector<std::pair<const Dataset*, double>> quad_cases = {
      {&ds_ring, 2.0}, {&ds_legged_small, 1e-4}, {&ds_legged, 0.01}};
  for (const auto& [ds, eps] : quad_cases) {
    const PolyModel model = fit_simple(*ds, ModelKind::kQuad, eps);
    if (!model.certificate.has_value()) return false;
    ok = ok && min_eig(*model.certificate) >= eps - 1e-9;
  }
  return ok;
}

// 4. Maximum work inequality for loads on and inside the fitted level set.
bool check_max_work(std::string& label) {
  Rng rng(104);
  const SupportConfig legged = gen_legged_support(rng);
  const Dataset ds_legged = gen_dataset(legged, Protocol::kLegged, 30, rng);
  const SupportConfig ring = gen_uniform_support(SupportKind::kRing, 360);
  const Dataset ds_ring = gen_dataset(ring, Protocol::kUniform, 20, rng);

  double worst = 1e300;
  for (const PolyModel& model : {fit_simple(ds_legged, ModelKind::kPoly4Cvx, 1e-4),
                                 fit_simple(ds_ring, ModelKind::kQuad, 1e-4)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const GeneralizedLoad F = invert(model, GeneralizedVelocity(rng.unit_sphere()));
      const GeneralizedLoad Fp =
          invert(model, GeneralizedVelocity(rng.unit_sphere())) * rng.uniform();
      const Eigen::Vector3d g = gradient(model, F);
      worst = std::min(worst, (F.vec() - Fp.vec()).dot(g));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "maximum work inequality over 2000 load pairs, min slack %.1e",
                worst);
  label = buf;
  return worst >= -1e-8;
}

// 5. Gradient-map inversion contract on fitted and closed-form models.
bool check_inversion(std::string& label) {
  Rng rng(105);
  const SupportConfig legged = gen_legged_support(rng);
  const Dataset ds_legged = gen_dataset(legged, Protocol::kLegged, 30, rng);
  const SupportConfig ring = gen_uniform_support(SupportKind::kRing, 360);
  const Dataset ds_ring = gen_dataset(ring, Protocol::kUniform, 30, rng);

  double level_err = 0.0, angle_err = 0.0;
  for (const PolyModel& model : {fit_simple(ds_legged, ModelKind::kPoly4Cvx, 1e-4),
                                 fit_simple(ds_ring, ModelKind::kQuad, 1e-4)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const GeneralizedVelocity V(rng.unit_sphere());
      const GeneralizedLoad F = invert(model, V);
      level_err = std::max(level_err, std::abs(evaluate(model, F) - 1.0));
      angle_err = std::max(angle_err, angle_rad(predict_velocity_direction(model, F), V.vec()));
    }
  }

  double closed_err = 0.0;
  const PolyModel sphere = oracle::sphere_quartic();
  const Eigen::Matrix3d A = Eigen::Vector3d(1.0, 1.0, 2.0).asDiagonal();
  const PolyModel ellipsoid = make_quadratic_model(A);
  const Eigen::Matrix3d Ainv = A.inverse();
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector3d v = rng.unit_sphere();
    closed_err = std::max(closed_err,
                          (invert(sphere, GeneralizedVelocity(v)).vec() - v).norm());
    const Eigen::Vector3d expected = Ainv * v / std::sqrt(v.dot(Ainv * v));
    closed_err = std::max(
        closed_err, (invert(ellipsoid, GeneralizedVelocity(v)).vec() - expected).norm());
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "inversion: level err %.1e, round-trip %.1e rad, closed forms %.1e", level_err,
                angle_err, closed_err);
  label = buf;
  return level_err <= 1e-9 && angle_err <= 1e-6 && closed_err <= 1e-9;
}

// 6. Noise-free recovery of the generating surface.
bool check_recovery(std::string& label) {
  Rng rng(106);
  const SupportConfig ring = gen_uniform_support(SupportKind::kRing, 360);
  const Dataset ds = gen_dataset(ring, Protocol::kUniform, 150, rng);
  const SplitPlan plan = split_dataset(ds, SplitFractions{}, {45}, rng);
  FitConfig config;
  config.kind = ModelKind::kPoly4Cvx;
  config.cv_grid = FitConfig::default_grid();
  auto t0 = Clock::now();
  const FitResult ring_fit =
      fit(subset(ds, plan.train_sets[0]), subset(ds, plan.validation), config);
  const double ring_seconds = seconds_since(t0);
  const double ring_delta = angular_error(ring_fit.model, subset(ds, plan.test)).mean_degrees;

  // Exact quadratic ground truth: loads with gradient direction v lie at
  // A^-1 v / sqrt(v' A^-1 v).
  const Eigen::Matrix3d A = Eigen::Vector3d(1.0, 1.5, 2.5).asDiagonal();
  const Eigen::Matrix3d Ainv = A.inverse();
  Dataset quad_data;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d v = rng.unit_sphere();
    const Eigen::Vector3d F = Ainv * v / std::sqrt(v.dot(Ainv * v));
    quad_data.pairs.push_back({GeneralizedLoad(F), GeneralizedVelocity(v)});
  }
  Dataset quad_train, quad_test;
  quad_train.meta = quad_data.meta;
  quad_test.meta = quad_data.meta;
  for (int i = 0; i < 60; ++i) quad_train.pairs.push_back(quad_data.pairs[i]);
  for (int i = 60; i < 100; ++i) quad_test.pairs.push_back(quad_data.pairs[i]);
  t0 = Clock::now();
  const PolyModel quad_model = fit_simple(quad_train, ModelKind::kQuad, 1e-4);
  const double quad_seconds = seconds_since(t0);
  const double quad_delta = angular_error(quad_model, quad_test).mean_degrees;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "clean-data recovery: ring hold-out %.3f deg (%.1fs), ellipsoid %.4f deg (%.1fs)",
                ring_delta, ring_seconds, quad_delta, quad_seconds);
  label = buf;
  return ring_delta < 2.0 && quad_delta < 0.1 && ring_seconds < 60.0 && quad_seconds < 60.0;
}

// 7. Full simulation study: ordering and trend properties of the three kinds.
bool check_study_trends(std::string& label) {
  const auto t0 = Clock::now();
  bool ok = true;
  for (const std::string protocol : {"ring", "legged"}) {
    StudyConfig cfg;
    cfg.protocol = protocol;
    const StudyReport report = run_study(cfg);

    std::printf("       %-7s size   poly4-cvx        quad       poly4\n", protocol.c_str());
    for (int size : cfg.train_sizes) {
      const StudyCell& cvx = report.cell(ModelKind::kPoly4Cvx, size);
      const StudyCell& quad = report.cell(ModelKind::kQuad, size);
      const StudyCell& poly4 = report.cell(ModelKind::kPoly4, size);
      std::printf("       %-7s %4d  %7.3f+-%.3f  %7.3f+-%.3f  %7.3f+-%.3f\n", "", size,
                  cvx.mean_degrees, cvx.ci_half_width, quad.mean_degrees, quad.ci_half_width,
                  poly4.mean_degrees, poly4.ci_half_width);
      ok = ok && cvx.failures == 0 && quad.failures == 0 && poly4.failures == 0;
      // (a) the certified quartic is never beaten by either baseline
      ok = ok && cvx.mean_degrees <= quad.mean_degrees &&
           cvx.mean_degrees <= poly4.mean_degrees;
    }
    // (b) with 7 samples the unconstrained quartic overfits hardest
    const double p7 = report.cell(ModelKind::kPoly4, 7).mean_degrees;
    ok = ok && p7 >= report.cell(ModelKind::kQuad, 7).mean_degrees &&
         p7 >= report.cell(ModelKind::kPoly4Cvx, 7).mean_degrees;
    // (c) certified-quartic error decreases with train size, within CI overlap
    for (size_t i = 0; i + 1 < cfg.train_sizes.size(); ++i) {
      const StudyCell& a = report.cell(ModelKind::kPoly4Cvx, cfg.train_sizes[i]);
      const StudyCell& b = report.cell(ModelKind::kPoly4Cvx, cfg.train_sizes[i + 1]);
      ok = ok && b.mean_degrees <= a.mean_degrees + a.ci_half_width + b.ci_half_width;
    }
  }
  const double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "study trends on ring and legged protocols, 50 trials each (%.0fs)", dt);
  label = buf;
  return ok && dt < 1800.0;
}

// 8. Free-sliding dynamics: closed-form stop, dissipation, terminal clustering.
bool check_sliding(std::string& label) {
  auto ke = [](const BodyParams& body, const GeneralizedVelocity& twist) {
    const double omega = twist.vz / body.rho;
    return 0.5 * (body.mass * (twist.vx * twist.vx + twist.vy * twist.vy) +
                  body.inertia_z * omega * omega);
  };
  auto dissipative = [&](const BodyParams& body, const Trajectory& traj) {
    double prev = ke(body, traj.states.front().twist);
    for (const auto& s : traj.states) {
      const double now = ke(body, s.twist);
      if (now > prev + 1e-12) return false;
      prev = now;
    }
    return true;
  };

  const PolyModel isotropic = make_quadratic_model(Eigen::Matrix3d::Identity());
  BodyParams puck;
  puck.mass = 2.0;
  puck.mu_support = 0.3;
  SlideState start;
  start.twist = {0.5, 0.0, 0.0};
  const Trajectory traj = simulate_sliding(isotropic, puck, start, SimOptions{});
  const double mug = puck.mu_support * puck.gravity;
  const double t_expected = 0.5 / mug;
  const double d_expected = 0.25 / (2.0 * mug);
  const double t_err = std::abs(traj.states.back().time - t_expected) / t_expected;
  const double d_err = std::abs(traj.states.back().pose.x - d_expected) / d_expected;
  bool ok = traj.reached_rest && t_err <= 0.005 && d_err <= 0.005 && dissipative(puck, traj);

  // Distinct spins and slides funnel into one terminal twist direction.
  Rng rng(42);
  const SupportConfig legged = gen_legged_support(rng);
  const Dataset ds = gen_dataset(legged, Protocol::kLegged, 150, rng);
  const PolyModel model = fit_simple(ds, ModelKind::kPoly4Cvx, 1e-4);
  BodyParams body;
  body.rho = model.rho;
  SimOptions options;
  options.max_time = 60.0;
  std::vector<Eigen::Vector3d> finals;
  for (const GeneralizedVelocity& twist :
       {GeneralizedVelocity(0.15, -0.15, 6.2832), GeneralizedVelocity(0.25, -0.10, 9.4248),
        GeneralizedVelocity(0.50, 0.10, 3.1416)}) {
    SlideState s;
    s.twist = twist;
    const Trajectory t = simulate_sliding(model, body, s, options);
    ok = ok && t.reached_rest && dissipative(body, t);
    if (t.reached_rest) finals.push_back(final_twist_direction(t));
  }
  double max_pair_deg = 0.0;
  for (size_t i = 0; i < finals.size(); ++i) {
    for (size_t j = i + 1; j < finals.size(); ++j) {
      max_pair_deg = std::max(max_pair_deg, angle_rad(finals[i], finals[j]) * 180.0 / M_PI);
    }
  }
  ok = ok && finals.size() == 3 && max_pair_deg <= 5.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "sliding: stop time err %.2f%%, distance err %.2f%%, terminal directions "
                "within %.2f deg",
                100.0 * t_err, 100.0 * d_err, max_pair_deg);
  label = buf;
  return ok;
}

// 9. Stable-push classification on analytic cases.
bool check_stable_push(std::string& label) {
  const PolyModel sphere = oracle::sphere_quartic();
  PushContact contact;
  contact.p1 = {-0.025, -0.05};
  contact.p2 = {0.025, -0.05};
  contact.normal = {0.0, 1.0};
  contact.mu_contact = 1.0;

  const StableResult straight = is_stable_push_twist(sphere, contact, translation_twist(0, 1));
  PushContact slick = contact;
  slick.mu_contact = 0.0;
  const StableResult pivot =
      is_stable_push(sphere, slick, COR{contact.p1.x(), contact.p1.y(), 1});

  PolyModel rescaled = sphere;
  rescaled.load_scale *= 10.0;
  bool invariant = true;
  for (const COR& cor : {COR{0.4, 0.1, 1}, COR{-2.0, 0.3, -1}, COR{0.0, 5.0, 1}}) {
    const StableResult a = is_stable_push(sphere, contact, cor);
    const StableResult b = is_stable_push(rescaled, contact, cor);
    invariant = invariant && a.stable == b.stable &&
                std::abs(a.margin - b.margin) <= 1e-12 * std::max(1.0, a.margin);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "stable push: straight push margin %.1e, frictionless pivot margin %.2f, "
                "classification scale-invariant",
                straight.margin, pivot.margin);
  label = buf;
  return straight.stable && !pivot.stable && pivot.margin >= 0.01 && invariant;
}

// 10. Byte-identical regeneration, including threaded studies.
bool check_determinism(std::string& label) {
  const fs::path dir = fs::temp_directory_path() / "limitsurf_acceptance";
  fs::create_directories(dir);

  auto generate = [&](const std::string& name) {
    Rng rng(77);
    const SupportConfig support = gen_legged_support(rng);
    Dataset ds = gen_dataset(support, Protocol::kLegged, 40, rng);
    ds = add_noise(ds, 0.1, rng);
    ds.meta.seed = 77;
    write_dataset((dir / name).string(), ds);
    return std::make_pair(slurp((dir / (name + ".csv")).string()),
                          slurp((dir / (name + ".meta.json")).string()));
  };
  const auto first = generate("gen_a");
  const auto second = generate("gen_b");
  const bool gen_ok = !first.first.empty() && first == second;

  StudyConfig cfg;
  cfg.protocol = "ring";
  cfg.uniform_points = 72;
  cfg.n_trials = 4;
  cfg.train_sizes = {7, 15};
  cfg.kinds = {ModelKind::kPoly4Cvx, ModelKind::kQuad};
  cfg.cv_grid = {{10.0, 10.0}, {100.0, 100.0}};
  cfg.jobs = 1;
  const std::string serial = study_report_json(run_study(cfg));
  cfg.jobs = 2;
  const std::string threaded_once = study_report_json(run_study(cfg));
  const std::string threaded_twice = study_report_json(run_study(cfg));
  const bool study_ok = serial == threaded_once && threaded_once == threaded_twice;

  fs::remove_all(dir);
  label = "byte-identical dataset regeneration and study reports (1 vs 2 workers, reruns)";
  return gen_ok && study_ok;
}

}  // namespace

int main() {
  int failures = 0;
  int index = 0;
  auto run = [&](bool (*check)(std::string&)) {
    ++index;
    std::string text;
    bool ok = false;
    try {
      ok = check(text);
    } catch (const std::exception& e) {
      text += std::string(" [exception: ") + e.what() + "]";
    }
    std::printf("%s  %2d. %s\n", ok ? "PASS" : "FAIL", index, text.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  run(check_certificate_system);
  run(check_calculus);
  run(check_certified_fits);
  run(check_max_work);
  run(check_inversion);
  run(check_recovery);
  run(check_study_trends);
  run(check_sliding);
  run(check_stable_push);
  run(check_determinism);

  std::printf("%d/%d checks passed\n", index - failures, index);
  return failures;
}
