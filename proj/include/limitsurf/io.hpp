#pragma once

#include <string>
#include <utility>
#include <vector>

#include "limitsurf/poly.hpp"
#include "limitsurf/push.hpp"
#include "limitsurf/sliding.hpp"
#include "limitsurf/study.hpp"
#include "limitsurf/support.hpp"

namespace limitsurf {

inline constexpr int kFormatVersion = 1;

// Datasets are a CSV of pairs (header fx,fy,fz,vx,vy,vz) plus a sibling
// metadata JSON carrying rho, mu, sigma, seed and the support layout.
// `out` may be a directory (dataset.csv inside) or a .csv path; the metadata
// sits next to the CSV as <name>.meta.json.
std::pair<std::string, std::string> dataset_paths(const std::string& out);
void write_dataset(const std::string& out, const Dataset& ds);
Dataset read_dataset(const std::string& csv_path);  // metadata optional

// Model JSON: degree, grlex ordering tag, coefficients, epsilon, certificate
// (flat row-major, null when absent), load_scale, rho.
void write_model(const std::string& path, const PolyModel& model);
PolyModel read_model(const std::string& path);

// Velocity list CSV, header vx,vy,vz.
std::vector<GeneralizedVelocity> read_velocities(const std::string& path);
void write_loads(const std::string& path, const std::vector<GeneralizedLoad>& loads);

// Trajectory CSV: t,x,y,theta,vx,vy,omega,Fx,Fy,Fz (omega unscaled, load in
// data units with Fz = tau/rho).
void write_trajectory(const std::string& path, const Trajectory& traj, double rho);

struct StableRow {
  double cx = 0.0;
  double cy = 0.0;
  int sense = 1;
  bool stable = false;
  double margin = 0.0;
};
void write_stable_rows(const std::string& path, const std::vector<StableRow>& rows);

void write_study_report(const std::string& path, const StudyReport& report);
std::string study_report_json(const StudyReport& report);

}  // namespace limitsurf
