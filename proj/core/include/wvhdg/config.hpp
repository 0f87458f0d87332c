#pragma once

#include "wvhdg/mesh.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wvhdg {

enum class ProblemKind { HConvergence, DeltaConvergence, Wavefront, Custom };
enum class DtRule { Fixed, HPower };
enum class OutputFormat { Csv, Vtk };

/// Everything a run of the driver needs. Text form:
///
///   [section]
///   key = value      # comment
///
/// Lists are comma separated. Unknown sections or keys are rejected.
struct RunConfig {
  ProblemKind problem = ProblemKind::Custom;

  // [physics]
  double c = 1.0;
  double k = 0.0;
  double delta = 0.0;
  double T = 1.0;

  // [manufactured] psi = A sin(omega t) sin(ell x) sin(ell y)
  double amplitude = 1e-2;
  double omega = 0.0;
  double ell = 0.0;

  // [initial] psi_i = amplitude_i sin(pi x) sin(pi y)
  double psi0_amplitude = 0.0;
  double psi1_amplitude = 0.0;

  // [source] a / sqrt(sigma) exp(-alpha t) exp(-r^2 / (2 sigma^2)) centred at (0.5, 0.5)
  double source_a = 0.0;
  double source_alpha = 0.0;
  double source_sigma = 1.0;

  // [discretization]
  int p = 1;
  std::vector<int> levels;
  int n = 8;
  double tau_bar = 1.0;
  TauMode tau_mode = TauMode::SingleFacet;

  // [newmark]
  double gamma = 0.5;
  double beta = 0.25;
  DtRule dt_rule = DtRule::HPower;
  double dt = 1e-3;        ///< used by the fixed rule
  int coarse_steps = 200;  ///< h-power rule: steps taken on the reference mesh
  int reference_n = 4;     ///< h-power rule: subdivisions of the reference mesh
  double tol = 1e-10;
  int s_max = 100;
  bool include_initial_forcing = true;

  // [delta]
  std::vector<double> deltas;

  // [wavefront]
  std::vector<double> snapshot_times;
  double profile_y = 0.5;
  int profile_points = 201;
  double compare_k = 0.0;

  // [output]
  std::string output_dir;
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const RunConfig&) const = default;
};

RunConfig default_config(ProblemKind kind);

/// Parses a config; values not given keep the defaults of the selected problem kind.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Throws ConfigError when a parameter is out of range.
void validate_config(const RunConfig& cfg);

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

/// Integers parsed from "4,8,16" (ConfigError on malformed input).
std::vector<int> parse_int_list(const std::string& s);

} // namespace wvhdg
