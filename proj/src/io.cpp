#include "limitsurf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace limitsurf {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Shortest exact decimal; stable across runs and platforms using IEEE doubles.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::vector<double> parse_row(const std::string& line, size_t expected, const std::string& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t pos = 0;
    row.push_back(std::stod(cell, &pos));
  }
  if (row.size() != expected) {
    throw std::runtime_error("bad row width in " + path + ": " + line);
  }
  return row;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

json load_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  in >> j;
  return j;
}

void dump_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::pair<std::string, std::string> dataset_paths(const std::string& out) {
  fs::path base(out);
  if (out.empty()) throw std::invalid_argument("empty output path");
  if (out.back() == '/' || (fs::exists(base) && fs::is_directory(base))) {
    base /= "dataset.csv";
  } else if (base.extension() != ".csv") {
    base += ".csv";
  }
  fs::path meta = base;
  meta.replace_extension(".meta.json");
  return {base.string(), meta.string()};
}

void write_dataset(const std::string& out, const Dataset& ds) {
  const auto [csv_path, meta_path] = dataset_paths(out);
  auto csv = open_out(csv_path);
  csv << "fx,fy,fz,vx,vy,vz\n";
  for (const auto& p : ds.pairs) {
    csv << fmt(p.F.fx) << ',' << fmt(p.F.fy) << ',' << fmt(p.F.fz) << ',' << fmt(p.V.vx) << ','
        << fmt(p.V.vy) << ',' << fmt(p.V.vz) << '\n';
  }

  json support;
  support["kind"] = ds.meta.support.kind;
  support["points"] = json::array();
  for (const auto& pt : ds.meta.support.points) {
    support["points"].push_back({pt.rx, pt.ry, pt.pressure});
  }
  json j;
  j["format_version"] = kFormatVersion;
  j["rho"] = ds.meta.rho;
  j["mu"] = ds.meta.mu;
  j["sigma"] = ds.meta.sigma;
  j["seed"] = ds.meta.seed;
  j["support"] = support;
  dump_json(meta_path, j);
}

Dataset read_dataset(const std::string& csv_path) {
  Dataset ds;
  auto in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "fx,fy,fz,vx,vy,vz") {
    throw std::runtime_error("dataset header mismatch in " + csv_path);
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto row = parse_row(line, 6, csv_path);
    ds.pairs.push_back({{row[0], row[1], row[2]}, {row[3], row[4], row[5]}});
  }

  fs::path meta = fs::path(csv_path);
  meta.replace_extension(".meta.json");
  if (fs::exists(meta)) {
    const json j = load_json(meta.string());
    ds.meta.rho = j.at("rho").get<double>();
    ds.meta.mu = j.at("mu").get<double>();
    ds.meta.sigma = j.at("sigma").get<double>();
    ds.meta.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("support")) {
      ds.meta.support.kind = j["support"].at("kind").get<std::string>();
      ds.meta.support.rho = ds.meta.rho;
      ds.meta.support.mu = ds.meta.mu;
      ds.meta.support.points.clear();
      for (const auto& pt : j["support"].at("points")) {
        ds.meta.support.points.push_back(
            {pt.at(0).get<double>(), pt.at(1).get<double>(), pt.at(2).get<double>()});
      }
    }
  }
  return ds;
}

void write_model(const std::string& path, const PolyModel& model) {
  model.validate();
  json j;
  j["format_version"] = kFormatVersion;
  j["degree"] = model.basis.degree;
  j["ordering"] = "grlex";
  j["coeffs"] = std::vector<double>(model.coeffs.data(), model.coeffs.data() + model.coeffs.size());
  j["epsilon"] = model.epsilon;
  if (model.certificate.has_value()) {
    std::vector<double> flat;
    const Eigen::MatrixXd& Q = *model.certificate;
    flat.reserve(Q.size());
    for (int r = 0; r < Q.rows(); ++r) {
      for (int c = 0; c < Q.cols(); ++c) flat.push_back(Q(r, c));
    }
    j["Q"] = flat;
  } else {
    j["Q"] = nullptr;
  }
  j["load_scale"] = model.load_scale;
  j["rho"] = model.rho;
  dump_json(path, j);
}

PolyModel read_model(const std::string& path) {
  const json j = load_json(path);
  PolyModel model;
  model.basis = MonomialBasis::make(j.at("degree").get<int>());
  if (j.at("ordering").get<std::string>() != "grlex") {
    throw std::runtime_error("unsupported coefficient ordering in " + path);
  }
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  model.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  model.epsilon = j.at("epsilon").get<double>();
  model.load_scale = j.at("load_scale").get<double>();
  model.rho = j.at("rho").get<double>();
  if (!j.at("Q").is_null()) {
    const auto flat = j.at("Q").get<std::vector<double>>();
    const int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
    if (g * g != static_cast<int>(flat.size())) {
      throw std::runtime_error("certificate is not square in " + path);
    }
    Eigen::MatrixXd Q(g, g);
    for (int r = 0; r < g; ++r) {
      for (int c = 0; c < g; ++c) Q(r, c) = flat[r * g + c];
    }
    model.certificate = Q;
  }
  model.validate();
  return model;
}

std::vector<GeneralizedVelocity> read_velocities(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "vx,vy,vz") {
    throw std::runtime_error("velocity header mismatch in " + path);
  }
  std::vector<GeneralizedVelocity> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto row = parse_row(line, 3, path);
    out.push_back({row[0], row[1], row[2]});
  }
  return out;
}

void write_loads(const std::string& path, const std::vector<GeneralizedLoad>& loads) {
  auto out = open_out(path);
  out << "fx,fy,fz\n";
  for (const auto& f : loads) out << fmt(f.fx) << ',' << fmt(f.fy) << ',' << fmt(f.fz) << '\n';
}

void write_trajectory(const std::string& path, const Trajectory& traj, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  auto out = open_out(path);
  out << "t,x,y,theta,vx,vy,omega,Fx,Fy,Fz\n";
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const SlideState& s = traj.states[i];
    const GeneralizedLoad& F = traj.loads[i];
    out << fmt(s.time) << ',' << fmt(s.pose.x) << ',' << fmt(s.pose.y) << ',' << fmt(s.pose.theta)
        << ',' << fmt(s.twist.vx) << ',' << fmt(s.twist.vy) << ',' << fmt(s.twist.vz / rho) << ','
        << fmt(F.fx) << ',' << fmt(F.fy) << ',' << fmt(F.fz) << '\n';
  }
}

void write_stable_rows(const std::string& path, const std::vector<StableRow>& rows) {
  auto out = open_out(path);
  out << "cx,cy,sense,stable,margin\n";
  for (const auto& r : rows) {
    out << fmt(r.cx) << ',' << fmt(r.cy) << ',' << r.sense << ',' << (r.stable ? 1 : 0) << ','
        << fmt(r.margin) << '\n';
  }
}

std::string study_report_json(const StudyReport& report) {
  json cfg;
  cfg["protocol"] = report.config.protocol;
  cfg["n_trials"] = report.config.n_trials;
  cfg["dataset_size"] = report.config.dataset_size;
  cfg["fractions"] = {report.config.fractions.test, report.config.fractions.validation,
                      report.config.fractions.train_pool};
  cfg["train_sizes"] = report.config.train_sizes;
  cfg["sigma"] = report.config.sigma;
  json kinds = json::array();
  for (ModelKind k : report.config.kinds) kinds.push_back(kind_name(k));
  cfg["kinds"] = kinds;
  cfg["master_seed"] = report.config.master_seed;
  cfg["uniform_points"] = report.config.uniform_points;
  cfg["epsilon"] = report.config.epsilon;
  cfg["floor_epsilon"] = report.config.floor_epsilon;
  cfg["floor_ref_size"] = report.config.floor_ref_size;
  cfg["floor_half_life"] = report.config.floor_half_life;
  json grid = json::array();
  for (const auto& [e1, e2] : report.config.cv_grid) grid.push_back({e1, e2});
  cfg["cv_grid"] = grid;
  // jobs intentionally omitted: the report must not depend on the worker count

  json cells = json::array();
  for (const auto& c : report.cells) {
    json cell;
    cell["kind"] = kind_name(c.kind);
    cell["train_size"] = c.train_size;
    cell["mean_degrees"] = c.mean_degrees;
    cell["ci_half_width"] = c.ci_half_width;
    cell["failures"] = c.failures;
    cell["trials"] = c.trial_degrees;
    cells.push_back(cell);
  }

  json j;
  j["format_version"] = kFormatVersion;
  j["config"] = cfg;
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

void write_study_report(const std::string& path, const StudyReport& report) {
  auto out = open_out(path);
  out << study_report_json(report);
}

}  // namespace limitsurf
