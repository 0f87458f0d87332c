#include "wvhdg/time_integrator.hpp"

#include "wvhdg/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <tuple>

namespace wvhdg {

void NewmarkConfig::validate() const {
  if (!(dt > 0.0))
    throw InputError("newmark: dt must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw InputError("newmark: gamma must lie in [0, 1]");
  if (!(beta >= 0.0 && beta <= 0.5))
    throw InputError("newmark: beta must lie in [0, 1/2]");
  if (!(tol > 0.0))
    throw InputError("newmark: tol must be positive");
  if (s_max < 1)
    throw InputError("newmark: s_max must be at least 1");
}

State State::zero(const DofLayout& layout) {
  State s;
  s.psi = s.dpsi = s.ddpsi = Eigen::VectorXd::Zero(layout.n_scalar());
  s.lam = s.dlam = s.ddlam = Eigen::VectorXd::Zero(layout.n_facet());
  s.velocity = Eigen::VectorXd::Zero(layout.n_vector());
  return s;
}

void ProblemDefinition::validate() const {
  if (!(c > 0.0))
    throw InputError("problem: c must be positive");
  if (!(delta >= 0.0))
    throw InputError("problem: delta must be nonnegative");
  if (!(delta < delta_bar))
    throw InputError("problem: delta must be below delta_bar");
  if (!(T > 0.0))
    throw InputError("problem: T must be positive");
  if (!std::isfinite(k))
    throw InputError("problem: k must be finite");
}

SchemeParameters scheme_parameters(const ProblemDefinition& prob, const NewmarkConfig& cfg) {
  return SchemeParameters{prob.c, prob.delta, cfg.dt, cfg.gamma, cfg.beta};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> elliptic_projection(const CondensedOperators& cond,
                                                                 const ScalarFunction& minus_source) {
  const Discretization& disc = cond.discretization();
  const auto& lay = disc.layout();
  if (!minus_source)
    return {Eigen::VectorXd::Zero(lay.n_scalar()), Eigen::VectorXd::Zero(lay.n_facet())};
  if (!cond.has_bar())
    throw InitializationError("initial data: the condensed elliptic matrix is singular; use the uniform tau mode");

  const Eigen::VectorXd load = assemble_load(disc, [&](const Point& x, double) { return -minus_source(x); }, 0.0);
  // S_psi Psi + R Lambda = load,  R^T Psi + A Lambda = 0.
  const Eigen::VectorXd spsi_inv_load = cond.solve_S_psi(load);
  Eigen::VectorXd lam = cond.solve_Sbar_lambda(-cond.apply_Rt(spsi_inv_load));
  Eigen::VectorXd psi = cond.solve_S_psi(load - cond.apply_R(lam));
  return {std::move(psi), std::move(lam)};
}

State compute_initial_state(const ProblemDefinition& prob, const CondensedOperators& cond) {
  const Discretization& disc = cond.discretization();
  State s = State::zero(disc.layout());
  std::tie(s.psi, s.lam) = elliptic_projection(cond, prob.lap_psi0);
  std::tie(s.dpsi, s.dlam) = elliptic_projection(cond, prob.lap_psi1);
  s.velocity = reconstruct_velocity(disc, s.psi, s.lam);
  return s;
}

void compute_initial_acceleration(State& state, const ProblemDefinition& prob, const CondensedOperators& cond,
                                  const NewmarkConfig& cfg) {
  cond.require(scheme_parameters(prob, cfg));
  const Discretization& disc = cond.discretization();
  const auto& lay = disc.layout();
  const double c2 = prob.c * prob.c;
  const double r = prob.delta / c2;

  const Eigen::VectorXd psi_t = state.psi + r * state.dpsi;
  const Eigen::VectorXd lam_t = state.lam + r * state.dlam;
  Eigen::VectorXd rhs = -c2 * (cond.apply_S_psi(psi_t) + cond.apply_R(lam_t));
  if (cfg.include_initial_forcing && prob.forcing)
    rhs += assemble_load(disc, prob.forcing, state.t);

  const auto N = assemble_nonlinear_mass(disc, state.dpsi, prob.k);
  const int n = lay.scalar_local();
  state.ddpsi.resize(lay.n_scalar());
  for (int e = 0; e < lay.num_elements(); ++e)
    state.ddpsi.segment(e * n, n) = N[e].llt().solve(rhs.segment(e * n, n));
  state.ddlam = cond.solve_A_lambda(-cond.apply_Rt(state.ddpsi));
}

Prediction predict(const State& s, const NewmarkConfig& cfg, double delta, double c) {
  const double dt = cfg.dt;
  const double a = 0.5 * dt * dt * (1.0 - 2.0 * cfg.beta);
  const double b = (1.0 - cfg.gamma) * dt;
  const double r = delta / (c * c);
  Prediction p;
  p.psi = s.psi + dt * s.dpsi + a * s.ddpsi;
  p.dpsi = s.dpsi + b * s.ddpsi;
  p.lam = s.lam + dt * s.dlam + a * s.ddlam;
  p.dlam = s.dlam + b * s.ddlam;
  p.psi_tilde = p.psi + r * p.dpsi;
  p.lam_tilde = p.lam + r * p.dlam;
  return p;
}

Eigen::VectorXd step_vector(const Prediction& pred, const Eigen::VectorXd& load, double c,
                            const CondensedOperators& cond) {
  return load - (c * c) * (cond.apply_S_psi(pred.psi_tilde) + cond.apply_R(pred.lam_tilde));
}

CorrectorIterate corrector_step(const CorrectorIterate& cur, const Prediction& pred, const Eigen::VectorXd& L,
                                double k, const CondensedOperators& cond, const NewmarkConfig& cfg) {
  const Discretization& disc = cond.discretization();
  const Eigen::VectorXd R = apply_nonlinear_defect(disc, cur.dpsi, k, cur.ddpsi) + L;
  const Eigen::VectorXd Z = cond.solve_M_mu_S(R);
  CorrectorIterate next;
  next.ddlam = cond.condensed_solve(-cond.apply_Rt(Z));
  next.ddpsi = cond.solve_M_mu_S(R - cond.mu() * cond.apply_R(next.ddlam));
  next.dpsi = pred.dpsi + cfg.gamma * cfg.dt * next.ddpsi;
  return next;
}

namespace {

double relative_change(const Eigen::VectorXd& diff, const Eigen::VectorXd& value) {
  const double d = diff.norm();
  const double v = value.norm();
  return v > 0.0 ? d / v : d;
}

} // namespace

int advance_step(State& state, const NewmarkConfig& cfg, const ProblemDefinition& prob,
                 const CondensedOperators& cond, int step_index) {
  cfg.validate();
  cond.require(scheme_parameters(prob, cfg));
  const Discretization& disc = cond.discretization();
  const double dt = cfg.dt;
  const double t_next = state.t + dt;
  const double bdt2 = cfg.beta * dt * dt;
  const double gdt = cfg.gamma * dt;

  const Prediction pred = predict(state, cfg, prob.delta, prob.c);
  const Eigen::VectorXd load =
      prob.forcing ? assemble_load(disc, prob.forcing, t_next) : Eigen::VectorXd::Zero(disc.layout().n_scalar());
  const Eigen::VectorXd L = step_vector(pred, load, prob.c, cond);

  CorrectorIterate it{state.ddpsi, state.ddlam, pred.dpsi + gdt * state.ddpsi};
  double change = std::numeric_limits<double>::infinity();
  int s = 1;
  for (;; ++s) {
    CorrectorIterate next;
    try {
      next = corrector_step(it, pred, L, prob.k, cond, cfg);
    } catch (const NondegeneracyError& e) {
      throw NondegeneracyError(std::string(e.what()) + " (step " + std::to_string(step_index) + ", iteration " +
                                   std::to_string(s) + ")",
                               e.element());
    }
    const Eigen::VectorXd dd = next.ddpsi - it.ddpsi;
    change = relative_change(bdt2 * dd, pred.psi + bdt2 * next.ddpsi);
    if (cfg.beta == 0.0)
      change = std::max(change, relative_change(gdt * dd, next.dpsi));
    it = std::move(next);
    if (change < cfg.tol)
      break;
    if (s == cfg.s_max) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", change);
      throw NonconvergenceError("corrector did not converge in " + std::to_string(cfg.s_max) +
                                    " iterations at step " + std::to_string(step_index) +
                                    " (last relative change " + buf + ")",
                                step_index, s, change);
    }
  }

  state.t = t_next;
  state.psi = pred.psi + bdt2 * it.ddpsi;
  state.dpsi = pred.dpsi + gdt * it.ddpsi;
  state.ddpsi = std::move(it.ddpsi);
  state.lam = pred.lam + bdt2 * it.ddlam;
  state.dlam = pred.dlam + gdt * it.ddlam;
  state.ddlam = std::move(it.ddlam);
  state.velocity.reset();
  return s;
}

double RunResult::mean_iterations() const {
  if (iterations.empty())
    return 0.0;
  return static_cast<double>(std::accumulate(iterations.begin(), iterations.end(), 0L)) / iterations.size();
}

int number_of_steps(double T, double dt) {
  const double ratio = T / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    std::cerr << "warning: T/dt = " << ratio << " is not an integer; using " << steps << " steps\n";
  return static_cast<int>(steps);
}

RunResult run(const ProblemDefinition& prob, const Discretization& disc, const NewmarkConfig& cfg,
              const std::vector<Observer>& observers) {
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  return run(prob, cond, cfg, observers);
}

RunResult run(const ProblemDefinition& prob, const CondensedOperators& cond, const NewmarkConfig& cfg,
              const std::vector<Observer>& observers) {
  prob.validate();
  cfg.validate();
  const Discretization& disc = cond.discretization();

  RunResult result;
  result.state = compute_initial_state(prob, cond);
  compute_initial_acceleration(result.state, prob, cond, cfg);
  for (const auto& obs : observers)
    obs(result.state, 0);

  const int nt = number_of_steps(prob.T, cfg.dt);
  result.iterations.reserve(nt);
  for (int n = 0; n < nt; ++n) {
    result.iterations.push_back(advance_step(result.state, cfg, prob, cond, n + 1));
    // Recompute t from the step count so rounding does not accumulate.
    result.state.t = (n + 1) * cfg.dt;
    if (!observers.empty() || n + 1 == nt) {
      result.state.velocity = reconstruct_velocity(disc, result.state.psi, result.state.lam);
      for (const auto& obs : observers)
        obs(result.state, n + 1);
    }
  }
  result.steps = nt;
  if (!result.state.velocity)
    result.state.velocity = reconstruct_velocity(disc, result.state.psi, result.state.lam);
  return result;
}

} // namespace wvhdg
