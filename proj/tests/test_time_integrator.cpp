#include "fixtures.hpp"
#include "oracle.hpp"

#include "wvhdg/analysis.hpp"
#include "wvhdg/errors.hpp"
#include "wvhdg/problems.hpp"
#include "wvhdg/time_integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wvhdg;
using std::numbers::pi;

namespace {

// Dense copies of the condensed element operators.
struct Dense {
  oracle::DenseOperators o;
  Eigen::MatrixXd bMinv, Spsi, R, A;

  explicit Dense(const Discretization& disc) : o(oracle::assemble(disc)) {
    bMinv = o.bM.inverse();
    Spsi = o.S + o.B.transpose() * bMinv * o.B;
    R = o.F + o.B.transpose() * bMinv * o.E;
    A = o.G + o.E.transpose() * bMinv * o.E;
  }

  // Stiffness action on (Psi, Lambda) written with the uncondensed velocity.
  Eigen::VectorXd stiffness(const Eigen::VectorXd& psi, const Eigen::VectorXd& lam) const {
    const Eigen::VectorXd V = -bMinv * (o.B * psi + o.E * lam);
    return o.S * psi + o.F * lam - o.B.transpose() * V;
  }
};

ProblemDefinition sinsin_problem(double c, double k, double delta, double a0, double a1) {
  DeltaParameters d;
  d.c = c;
  d.k = k;
  d.delta = delta;
  d.a0 = a0;
  d.a1 = a1;
  return delta_problem(d);
}

State random_constrained_state(const CondensedOperators& cond, unsigned seed, double scale) {
  const auto& lay = cond.discretization().layout();
  State s = State::zero(lay);
  s.psi = fixtures::random_vector(lay.n_scalar(), seed, scale);
  s.dpsi = fixtures::random_vector(lay.n_scalar(), seed + 1, scale);
  s.lam = cond.solve_A_lambda(-cond.apply_Rt(s.psi));
  s.dlam = cond.solve_A_lambda(-cond.apply_Rt(s.dpsi));
  s.velocity.reset();
  return s;
}

} // namespace

TEST_SUITE("time_integrator") {

TEST_CASE("elliptic projection matches the dense three-field solve") {
  const Discretization disc(generate_structured_mesh(2), 1);
  const CondensedOperators cond(disc, {1.0, 0.0, 0.01, 0.5, 0.25});
  const Dense d(disc);
  // Quadratic source, so the library's load quadrature is exact and the oracle load agrees.
  auto lap = [](const Point& x) { return -2.0 * x.y() * (1 - x.y()) - 2.0 * x.x() * (1 - x.x()); };
  const auto [Psi, Lam] = elliptic_projection(cond, lap);

  const Eigen::Index nv = d.o.bM.rows(), ns = d.o.M.rows(), nf = d.o.G.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + ns + nf, nv + ns + nf);
  K << d.o.bM, d.o.B, d.o.E, -d.o.B.transpose(), d.o.S, d.o.F, -d.o.E.transpose(), d.o.F.transpose(), d.o.G;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K.rows());
  rhs.segment(nv, ns) = oracle::load(disc, [&](const Point& x) { return -lap(x); });
  const Eigen::VectorXd sol = K.lu().solve(rhs);
  CHECK((Psi - sol.segment(nv, ns)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((Lam - sol.tail(nf)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("elliptic projection is exact for polynomial solutions") {
  // psi = x(1-x)y(1-y) lies in P^4 and vanishes on the boundary.
  const Discretization disc(generate_structured_mesh(2), 4);
  const CondensedOperators cond(disc, {1.0, 0.0, 0.01, 0.5, 0.25});
  auto psi = [](const Point& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  auto lap = [](const Point& x) { return -2.0 * x.y() * (1 - x.y()) - 2.0 * x.x() * (1 - x.x()); };
  const auto [Psi, Lam] = elliptic_projection(cond, lap);
  CHECK(oracle::l2_error(disc, Psi, psi) < 1e-12);
  const Eigen::VectorXd V = reconstruct_velocity(disc, Psi, Lam);
  CHECK(l2_error(disc, V, [](const Point& x) {
          return Point((1 - 2 * x.x()) * x.y() * (1 - x.y()), x.x() * (1 - x.x()) * (1 - 2 * x.y()));
        }) < 1e-12);
}

TEST_CASE("initial state") {
  const Discretization disc(generate_structured_mesh(2), 1);
  ProblemDefinition zero;
  const NewmarkConfig cfg;
  const CondensedOperators cond(disc, scheme_parameters(zero, cfg));
  State s = compute_initial_state(zero, cond);
  CHECK(s.psi.norm() == 0.0);
  CHECK(s.dpsi.norm() == 0.0);
  compute_initial_acceleration(s, zero, cond, cfg);
  CHECK(s.ddpsi.norm() == 0.0);
  CHECK(s.ddlam.norm() == 0.0);

  const ProblemDefinition man = manufactured_problem();
  const CondensedOperators cm(disc, scheme_parameters(man, cfg));
  const State m = compute_initial_state(man, cm);
  CHECK(m.psi.norm() == 0.0);
  CHECK(m.dpsi.norm() > 0.0);
}

TEST_CASE("initial acceleration matches the dense systems") {
  const Discretization disc(fixtures::jittered_mesh(2, 12), 1);
  const ProblemDefinition prob = sinsin_problem(2.0, 0.4, 0.05, 0.1, 0.5);
  NewmarkConfig cfg;
  cfg.dt = 0.01;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = compute_initial_state(prob, cond);
  compute_initial_acceleration(s, prob, cond, cfg);

  const Dense d(disc);
  const double r = prob.delta / (prob.c * prob.c);
  const Eigen::VectorXd rhs = -prob.c * prob.c * d.stiffness(s.psi + r * s.dpsi, s.lam + r * s.dlam);
  const Eigen::VectorXd ddpsi = oracle::nonlinear_mass(disc, s.dpsi, prob.k).lu().solve(rhs);
  const Eigen::VectorXd ddlam = d.A.lu().solve(-d.R.transpose() * ddpsi);
  CHECK((s.ddpsi - ddpsi).norm() < 1e-11 * ddpsi.norm());
  CHECK((s.ddlam - ddlam).norm() < 1e-11 * std::max(1.0, ddlam.norm()));
}

TEST_CASE("predictor") {
  const DofLayout lay(generate_structured_mesh(1), FacetTopology(generate_structured_mesh(1), 1.0, TauMode::SingleFacet), 1);
  State s = State::zero(lay);
  s.psi = fixtures::random_vector(lay.n_scalar(), 1);
  s.dpsi = fixtures::random_vector(lay.n_scalar(), 2);
  s.lam = fixtures::random_vector(lay.n_facet(), 3);
  s.dlam = fixtures::random_vector(lay.n_facet(), 4);
  NewmarkConfig cfg;
  cfg.dt = 0.1;
  Prediction p = predict(s, cfg, 0.0, 1.0);
  CHECK((p.psi - (s.psi + 0.1 * s.dpsi)).norm() < 1e-15);
  CHECK((p.dpsi - s.dpsi).norm() == 0.0);
  CHECK((p.psi_tilde - p.psi).norm() == 0.0);
  CHECK((p.lam_tilde - p.lam).norm() == 0.0);

  s.ddpsi = fixtures::random_vector(lay.n_scalar(), 5);
  cfg.beta = 0.5;
  p = predict(s, cfg, 0.0, 1.0);
  CHECK((p.psi - (s.psi + 0.1 * s.dpsi)).norm() < 1e-15);
  p = predict(s, cfg, 0.2, 2.0);
  CHECK((p.psi_tilde - (p.psi + 0.05 * p.dpsi)).norm() < 1e-15);
}

TEST_CASE("corrector iterates match a dense reimplementation") {
  const Discretization disc(generate_structured_mesh(2), 1);
  const ProblemDefinition prob = sinsin_problem(1.0, 0.5, 0.01, 0.05, 0.4);
  NewmarkConfig cfg;
  cfg.dt = 0.02;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = compute_initial_state(prob, cond);
  compute_initial_acceleration(s, prob, cond, cfg);
  const Prediction pred = predict(s, cfg, prob.delta, prob.c);
  const Eigen::VectorXd L = step_vector(pred, Eigen::VectorXd::Zero(s.psi.size()), prob.c, cond);

  const Dense d(disc);
  const double mu = cond.mu();
  const Eigen::VectorXd Ld = -prob.c * prob.c * d.stiffness(pred.psi_tilde, pred.lam_tilde);
  CHECK((L - Ld).norm() < 1e-12 * Ld.norm());

  // Monolithic three-field system per iteration:
  //   bM V + B P + E Lam = 0,  M P - mu B^T V + mu S P + mu F Lam = Rhs,  -E^T V + F^T P + G Lam = 0.
  const Eigen::Index nv = d.o.bM.rows(), ns = d.o.M.rows(), nf = d.o.G.rows();
  Eigen::MatrixXd K(nv + ns + nf, nv + ns + nf);
  K << d.o.bM, d.o.B, d.o.E, -mu * d.o.B.transpose(), d.o.M + mu * d.o.S, mu * d.o.F, -d.o.E.transpose(),
      d.o.F.transpose(), d.o.G;
  const auto lu = K.lu();

  CorrectorIterate lib{s.ddpsi, s.ddlam, pred.dpsi + cfg.gamma * cfg.dt * s.ddpsi};
  Eigen::VectorXd ddpsi = s.ddpsi;
  for (int it = 0; it < 6; ++it) {
    const Eigen::VectorXd theta = pred.dpsi + cfg.gamma * cfg.dt * ddpsi;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K.rows());
    rhs.segment(nv, ns) = Ld + (d.o.M - oracle::nonlinear_mass(disc, theta, prob.k)) * ddpsi;
    const Eigen::VectorXd sol = lu.solve(rhs);
    ddpsi = sol.segment(nv, ns);
    lib = corrector_step(lib, pred, L, prob.k, cond, cfg);
    CHECK((lib.ddpsi - ddpsi).norm() <= 1e-12 * ddpsi.norm());
    CHECK((lib.ddlam - sol.tail(nf)).norm() <= 1e-12 * std::max(1.0, sol.tail(nf).norm()));
  }
}

TEST_CASE("linear corrector reaches its fixed point at once") {
  const Discretization disc(generate_structured_mesh(2), 1);
  const ProblemDefinition prob = sinsin_problem(1.0, 0.0, 0.0, 0.05, 0.4);
  NewmarkConfig cfg;
  cfg.dt = 0.02;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = compute_initial_state(prob, cond);
  compute_initial_acceleration(s, prob, cond, cfg);
  const Prediction pred = predict(s, cfg, prob.delta, prob.c);
  const Eigen::VectorXd L = step_vector(pred, Eigen::VectorXd::Zero(s.psi.size()), prob.c, cond);
  const CorrectorIterate first = corrector_step({s.ddpsi, s.ddlam, pred.dpsi}, pred, L, 0.0, cond, cfg);
  const CorrectorIterate second = corrector_step(first, pred, L, 0.0, cond, cfg);
  CHECK((second.ddpsi - first.ddpsi).norm() == 0.0);
  CHECK((second.ddlam - first.ddlam).norm() == 0.0);
  CHECK(advance_step(s, cfg, prob, cond) == 2);
}

TEST_CASE("zero data stays zero") {
  const Discretization disc(generate_structured_mesh(2), 1);
  ProblemDefinition prob;
  prob.k = 0.5;
  prob.T = 0.05;
  NewmarkConfig cfg;
  cfg.dt = 0.01;
  const RunResult r = run(prob, disc, cfg);
  CHECK(r.steps == 5);
  CHECK(r.state.psi.norm() == 0.0);
  CHECK(r.state.dpsi.norm() == 0.0);
  CHECK(r.state.lam.norm() == 0.0);
  CHECK(r.state.t == doctest::Approx(0.05));
}

TEST_CASE("no steps returns the initial state") {
  const Discretization disc(generate_structured_mesh(2), 1);
  ProblemDefinition prob = sinsin_problem(1.0, 0.1, 0.0, 0.0, 1.0);
  prob.T = 1e-3;
  NewmarkConfig cfg;
  cfg.dt = 1.0;
  CHECK(number_of_steps(prob.T, cfg.dt) == 0);
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  const State init = compute_initial_state(prob, cond);
  const RunResult r = run(prob, cond, cfg);
  CHECK(r.steps == 0);
  CHECK((r.state.dpsi - init.dpsi).norm() == 0.0);
  CHECK(r.iterations.empty());
}

TEST_CASE("observers see every time level") {
  const Discretization disc(generate_structured_mesh(2), 1);
  ProblemDefinition prob = sinsin_problem(1.0, 0.1, 0.0, 0.0, 1.0);
  prob.T = 0.1;
  NewmarkConfig cfg;
  cfg.dt = 0.025;
  std::vector<int> steps;
  std::vector<double> times;
  run(prob, disc, cfg, {[&](const State& s, int step) {
        steps.push_back(step);
        times.push_back(s.t);
        CHECK(s.velocity.has_value());
      }});
  CHECK(steps == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(times.back() == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("energy is conserved in the linear undamped limit") {
  const Discretization disc(generate_structured_mesh(4), 1);
  ProblemDefinition prob;
  prob.c = 1.3;
  NewmarkConfig cfg;
  cfg.dt = 0.01;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = random_constrained_state(cond, 77, 1.0);
  compute_initial_acceleration(s, prob, cond, cfg);
  const double e0 = energy(disc, s, 0.0, prob.c).first;
  double drift = 0.0;
  for (int n = 0; n < 100; ++n) {
    CHECK(advance_step(s, cfg, prob, cond, n) == 2);
    drift = std::max(drift, std::abs(energy(disc, s, 0.0, prob.c).first - e0) / e0);
  }
  CHECK(drift <= 1e-8);
}

TEST_CASE("failures") {
  const Discretization disc(generate_structured_mesh(2), 1);
  ProblemDefinition prob = sinsin_problem(1.0, 0.5, 0.0, 0.0, 0.5);
  prob.T = 0.1;
  NewmarkConfig cfg;
  cfg.dt = 0.05;
  cfg.s_max = 1;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = compute_initial_state(prob, cond);
  compute_initial_acceleration(s, prob, cond, cfg);
  State copy = s;
  CHECK_THROWS_AS(advance_step(copy, cfg, prob, cond), NonconvergenceError);

  // 1 + 2k dpsi <= 0 under a large negative initial velocity.
  ProblemDefinition bad = sinsin_problem(1.0, 0.5, 0.0, 0.0, -5.0);
  NewmarkConfig c2;
  c2.dt = 0.05;
  CHECK_THROWS_AS(run(bad, disc, c2), NondegeneracyError);

  NewmarkConfig other;
  other.dt = 0.07;
  CHECK_THROWS_AS(advance_step(s, other, prob, cond), CondensationError);

  NewmarkConfig invalid;
  invalid.beta = 0.7;
  CHECK_THROWS_AS(invalid.validate(), InputError);
  ProblemDefinition neg;
  neg.delta = -1.0;
  CHECK_THROWS_AS(neg.validate(), InputError);
}

}
