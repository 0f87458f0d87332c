#pragma once

#include "wvhdg/analysis.hpp"
#include "wvhdg/config.hpp"
#include "wvhdg/problems.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wvhdg {

/// Mesh size of the structured n x n mesh of the unit square.
double structured_h(int n);

/// Time step for a level with n subdivisions. The h-power rule takes dt = T / ceil(T / (C h^{(p+2)/2}))
/// with C fixed so that the reference mesh takes exactly `coarse_steps` steps.
double time_step(const RunConfig& cfg, int n);

NewmarkConfig newmark_config(const RunConfig& cfg, double dt);

ManufacturedParameters manufactured_parameters(const RunConfig& cfg);
ProblemDefinition problem_from_config(const RunConfig& cfg);

/// Errors at T for each mesh level. A failing level is recorded with its message and the
/// remaining levels still run. Writes h_convergence_p<p>.csv to cfg.output_dir when it is set.
ErrorReport run_h_convergence(const RunConfig& cfg, std::ostream* log = nullptr);

/// CSV with header h,dt,err_psi,rate_psi,err_v,rate_v,err_psistar,rate_psistar.
std::string convergence_csv(const ErrorReport& report);

struct DeltaLevel {
  double delta = 0.0;
  double err_psi = 0.0; ///< ||psi_h^(delta) - psi_h^(0)|| at T
  double err_v = 0.0;   ///< ||v_h^(delta) - v_h^(0)|| at T
  double mean_iterations = 0.0;
};

struct DeltaReport {
  int degree = 0;
  int n = 0;
  double dt = 0.0;
  std::vector<DeltaLevel> levels;
  std::optional<double> slope_psi; ///< least-squares log-log slope over the positive entries
  std::optional<double> slope_v;

  std::vector<std::optional<double>> rates_psi() const;
  std::vector<std::optional<double>> rates_v() const;
};

DeltaReport run_delta_convergence(const RunConfig& cfg, std::ostream* log = nullptr);

/// CSV with header delta,err_psi,rate_psi,err_v,rate_v.
std::string delta_csv(const DeltaReport& report);

/// Least-squares slope of log(y) against log(x) over entries with x, y > 0.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct WavefrontProfile {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> dpsi;         ///< k = cfg.k
  std::vector<double> dpsi_compare; ///< k = cfg.compare_k
};

struct WavefrontReport {
  int degree = 0;
  int n = 0;
  double dt = 0.0;
  int steps = 0;
  double k = 0.0;
  double compare_k = 0.0;
  std::vector<WavefrontProfile> profiles;
  double mean_iterations = 0.0;
  int max_iterations = 0;
  double mean_iterations_compare = 0.0;
  int max_iterations_compare = 0;
};

/// Runs the forced problem for k and compare_k and samples dpsi_h along y = profile_y at the
/// snapshot times. Writes the profiles and dpsi_h snapshots to cfg.output_dir when it is set.
WavefrontReport run_wavefront(const RunConfig& cfg, std::ostream* log = nullptr);

/// CSV with header t,x,dpsi,dpsi_compare.
std::string wavefront_csv(const WavefrontReport& report);

struct CustomReport {
  int steps = 0;
  double dt = 0.0;
  std::vector<double> t, e0, e1;
  double mean_iterations = 0.0;
};

/// Single run on the n x n mesh with energy monitoring; writes energy.csv, psi.csv (or .vtk)
/// and dpsi.csv (or .vtk) to cfg.output_dir when it is set.
CustomReport run_custom(const RunConfig& cfg, std::ostream* log = nullptr);

} // namespace wvhdg
