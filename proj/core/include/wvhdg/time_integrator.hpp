#pragma once

#include "wvhdg/condensation.hpp"
#include "wvhdg/hdg_ops.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace wvhdg {

using SpaceTimeVectorFunction = std::function<Point(const Point&, double)>;

struct NewmarkConfig {
  double dt = 1e-3;
  double gamma = 0.5;
  double beta = 0.25;
  double tol = 1e-10;
  int s_max = 100;
  /// Include the load Phi^0 in the initial acceleration solve. Off reproduces a forcing-free start.
  bool include_initial_forcing = true;

  void validate() const;
};

/// Coefficient vectors of one time level. `velocity` caches V = -bM^-1 (B Psi + E Lambda).
struct State {
  double t = 0.0;
  Eigen::VectorXd psi, dpsi, ddpsi;
  Eigen::VectorXd lam, dlam, ddlam;
  std::optional<Eigen::VectorXd> velocity;

  static State zero(const DofLayout& layout);
};

/// Physical parameters, data and (optionally) the exact solution of a Westervelt problem.
/// Empty callables are read as identically zero.
struct ProblemDefinition {
  double c = 1.0;
  double k = 0.0;
  double delta = 0.0;
  double delta_bar = std::numeric_limits<double>::infinity();
  double T = 1.0;

  ScalarFunction psi0, psi1;
  ScalarFunction lap_psi0, lap_psi1;
  SpaceTimeFunction forcing;

  SpaceTimeFunction exact_psi;
  SpaceTimeFunction exact_dpsi;
  SpaceTimeVectorFunction exact_v;

  void validate() const;
};

SchemeParameters scheme_parameters(const ProblemDefinition& prob, const NewmarkConfig& cfg);

/// HDG elliptic (Ritz-type) solve with source -Laplacian(psi_i): returns (Psi, Lambda).
std::pair<Eigen::VectorXd, Eigen::VectorXd> elliptic_projection(const CondensedOperators& cond,
                                                                 const ScalarFunction& minus_source);

/// Discrete initial data at t = 0 with zero accelerations and V filled in.
State compute_initial_state(const ProblemDefinition& prob, const CondensedOperators& cond);

/// Fills ddpsi, ddlam of a t = 0 state:
///   N(dPsi) ddPsi = Phi^0 - c^2 (S_psi Psi~ + R_lam Lambda~),   A_lam ddLambda = -R_lam^T ddPsi.
void compute_initial_acceleration(State& state, const ProblemDefinition& prob, const CondensedOperators& cond,
                                  const NewmarkConfig& cfg);

struct Prediction {
  Eigen::VectorXd psi, dpsi, lam, dlam;
  Eigen::VectorXd psi_tilde, lam_tilde;
};

Prediction predict(const State& state, const NewmarkConfig& cfg, double delta, double c);

/// One corrector iterate (ddPsi, ddLambda, dPsi).
struct CorrectorIterate {
  Eigen::VectorXd ddpsi, ddlam, dpsi;
};

/// L = Phi^{n+1} - c^2 (S_psi Psi~^ + R_lam Lambda~^).
Eigen::VectorXd step_vector(const Prediction& pred, const Eigen::VectorXd& load, double c,
                            const CondensedOperators& cond);

CorrectorIterate corrector_step(const CorrectorIterate& current, const Prediction& pred, const Eigen::VectorXd& L,
                                double k, const CondensedOperators& cond, const NewmarkConfig& cfg);

/// Advances `state` by one step; returns the number of corrector iterations.
int advance_step(State& state, const NewmarkConfig& cfg, const ProblemDefinition& prob,
                 const CondensedOperators& cond, int step_index = 0);

/// Observers see each accepted time level (step 0 is the initial state).
using Observer = std::function<void(const State&, int step)>;

struct RunResult {
  State state;
  int steps = 0;
  std::vector<int> iterations;

  double mean_iterations() const;
};

/// N_T = round(T / dt); a warning goes to stderr when T / dt is not an integer within 1e-9.
int number_of_steps(double T, double dt);

RunResult run(const ProblemDefinition& prob, const Discretization& disc, const NewmarkConfig& cfg,
              const std::vector<Observer>& observers = {});

/// Same, reusing condensed operators built for (prob, cfg).
RunResult run(const ProblemDefinition& prob, const CondensedOperators& cond, const NewmarkConfig& cfg,
              const std::vector<Observer>& observers = {});

} // namespace wvhdg
