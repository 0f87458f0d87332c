#include "wvhdg/condensation.hpp"

#include "wvhdg/errors.hpp"

#include <string>

namespace wvhdg {

double newmark_mu(const SchemeParameters& p) { return p.c * p.c * p.dt * p.dt * p.beta + p.delta * p.gamma * p.dt; }

namespace {

void validate(const SchemeParameters& p) {
  if (!(p.c > 0.0))
    throw InputError("condensation: c must be positive");
  if (!(p.delta >= 0.0))
    throw InputError("condensation: delta must be nonnegative");
  if (!(p.dt > 0.0))
    throw InputError("condensation: time step must be positive");
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0))
    throw InputError("condensation: gamma must lie in [0, 1]");
  if (!(p.beta >= 0.0 && p.beta <= 0.5))
    throw InputError("condensation: beta must lie in [0, 1/2]");
}

std::string tau_mode_name(TauMode mode) { return mode == TauMode::SingleFacet ? "single-facet" : "uniform"; }

} // namespace

CondensedOperators::CondensedOperators(const Discretization& disc, const SchemeParameters& params)
    : disc_(&disc), params_(params), mu_(0.0) {
  validate(params);
  mu_ = newmark_mu(params);

  const auto& ops = disc.operators();
  const auto& lay = disc.layout();
  const int ne = lay.num_elements();
  const int nf = lay.facet_local();

  s_psi_.resize(ne);
  r_.resize(ne);
  x_.resize(ne);
  y_.resize(ne);
  xbar_.resize(ne);
  ybar_.resize(ne);
  m_mu_s_factor_.resize(ne);
  s_psi_factor_.resize(ne);

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> ta, ts, tsbar;
  auto add_block = [](std::vector<Triplet>& out, const Eigen::MatrixXd& blk, int r0, int c0) {
    for (int j = 0; j < blk.cols(); ++j)
      for (int i = 0; i < blk.rows(); ++i)
        out.emplace_back(r0 + i, c0 + j, blk(i, j));
  };
  for (int j = 0; j < disc.topology().num_interior_facets(); ++j) {
    add_block(ta, ops.G[j], j * nf, j * nf);
    add_block(ts, ops.G[j], j * nf, j * nf);
    add_block(tsbar, ops.G[j], j * nf, j * nf);
  }

  for (int e = 0; e < ne; ++e) {
    const Eigen::LLT<Eigen::MatrixXd> bm(ops.bM[e]);
    const Eigen::MatrixXd bm_inv_b = bm.solve(ops.B[e]);
    s_psi_[e] = ops.S[e] + ops.B[e].transpose() * bm_inv_b;

    m_mu_s_factor_[e].compute(ops.M[e] + mu_ * s_psi_[e]);
    if (m_mu_s_factor_[e].info() != Eigen::Success)
      throw CondensationError("condensation: M + mu S_psi is not positive definite in element " +
                              std::to_string(e));
    if (has_bar_) {
      s_psi_factor_[e].compute(s_psi_[e]);
      if (s_psi_factor_[e].info() != Eigen::Success) {
        has_bar_ = false;
        bar_reason_ = "S_psi is singular in element " + std::to_string(e) + " (" + tau_mode_name(disc.topology().mode()) +
                      " stabilization)";
      }
    }

    std::array<int, 3> fo{};
    std::array<Eigen::MatrixXd, 3> bm_inv_e;
    for (int i = 0; i < 3; ++i) {
      fo[i] = disc.facet_dof_offset(e, i);
      if (fo[i] < 0)
        continue;
      bm_inv_e[i] = bm.solve(ops.E[e][i]);
      r_[e][i] = ops.F[e][i] + ops.B[e].transpose() * bm_inv_e[i];
      y_[e][i] = m_mu_s_factor_[e].solve(mu_ * r_[e][i]);
      x_[e][i] = bm.solve(ops.E[e][i] - ops.B[e] * y_[e][i]);
      if (has_bar_) {
        ybar_[e][i] = s_psi_factor_[e].solve(r_[e][i]);
        xbar_[e][i] = bm.solve(ops.E[e][i] - ops.B[e] * ybar_[e][i]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (fo[i] < 0)
        continue;
      for (int j = 0; j < 3; ++j) {
        if (fo[j] < 0)
          continue;
        add_block(ta, ops.E[e][i].transpose() * bm_inv_e[j], fo[i], fo[j]);
        add_block(ts, ops.E[e][i].transpose() * x_[e][j] - ops.F[e][i].transpose() * y_[e][j], fo[i], fo[j]);
        if (has_bar_)
          add_block(tsbar, ops.E[e][i].transpose() * xbar_[e][j] - ops.F[e][i].transpose() * ybar_[e][j], fo[i],
                    fo[j]);
      }
    }
  }
  if (!has_bar_)
    for (int e = 0; e < ne; ++e)
      for (int i = 0; i < 3; ++i) {
        xbar_[e][i].resize(0, 0);
        ybar_[e][i].resize(0, 0);
      }

  const int nfac = lay.n_facet();
  a_lambda_.resize(nfac, nfac);
  a_lambda_.setFromTriplets(ta.begin(), ta.end());
  s_lambda_mu_.resize(nfac, nfac);
  s_lambda_mu_.setFromTriplets(ts.begin(), ts.end());

  const std::string hint = " with " + tau_mode_name(disc.topology().mode()) +
                           " stabilization; consider the uniform tau mode";
  if (nfac > 0) {
    s_factor_ = std::make_unique<SparseFactor>(s_lambda_mu_);
    if (s_factor_->info() != Eigen::Success)
      throw CondensationError("condensation: S_lambda_mu is singular" + hint);
    a_factor_ = std::make_unique<SparseFactor>(a_lambda_);
    if (a_factor_->info() != Eigen::Success)
      throw CondensationError("condensation: A_lambda is singular" + hint);
  }
  if (has_bar_) {
    sbar_lambda_.resize(nfac, nfac);
    sbar_lambda_.setFromTriplets(tsbar.begin(), tsbar.end());
    if (nfac > 0) {
      sbar_factor_ = std::make_unique<SparseFactor>(sbar_lambda_);
      if (sbar_factor_->info() != Eigen::Success) {
        has_bar_ = false;
        bar_reason_ = "Sbar_lambda is singular" + hint;
      }
    }
  }
}

void CondensedOperators::require(const SchemeParameters& params) const {
  if (!(params == params_))
    throw CondensationError("condensed operators were built for different (dt, delta, c, gamma, beta); rebuild them");
}

Eigen::VectorXd CondensedOperators::apply_S_psi(const Eigen::VectorXd& psi) const {
  return apply_block_diagonal(s_psi_, psi);
}

Eigen::VectorXd CondensedOperators::apply_R(const Eigen::VectorXd& lambda) const {
  const auto& lay = disc_->layout();
  const int n = lay.scalar_local(), nf = lay.facet_local();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(lay.n_scalar());
  for (int e = 0; e < lay.num_elements(); ++e)
    for (int i = 0; i < 3; ++i) {
      const int fo = disc_->facet_dof_offset(e, i);
      if (fo >= 0)
        y.segment(e * n, n).noalias() += r_[e][i] * lambda.segment(fo, nf);
    }
  return y;
}

Eigen::VectorXd CondensedOperators::apply_Rt(const Eigen::VectorXd& psi) const {
  const auto& lay = disc_->layout();
  const int n = lay.scalar_local(), nf = lay.facet_local();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(lay.n_facet());
  for (int e = 0; e < lay.num_elements(); ++e)
    for (int i = 0; i < 3; ++i) {
      const int fo = disc_->facet_dof_offset(e, i);
      if (fo >= 0)
        y.segment(fo, nf).noalias() += r_[e][i].transpose() * psi.segment(e * n, n);
    }
  return y;
}

Eigen::VectorXd CondensedOperators::solve_M_mu_S(const Eigen::VectorXd& r) const {
  const int n = disc_->layout().scalar_local();
  Eigen::VectorXd z(r.size());
  for (std::size_t e = 0; e < m_mu_s_factor_.size(); ++e)
    z.segment(e * n, n) = m_mu_s_factor_[e].solve(r.segment(e * n, n));
  return z;
}

Eigen::VectorXd CondensedOperators::solve_S_psi(const Eigen::VectorXd& r) const {
  if (!has_bar_)
    throw CondensationError("condensation: " + bar_reason_);
  const int n = disc_->layout().scalar_local();
  Eigen::VectorXd z(r.size());
  for (std::size_t e = 0; e < s_psi_factor_.size(); ++e)
    z.segment(e * n, n) = s_psi_factor_[e].solve(r.segment(e * n, n));
  return z;
}

Eigen::VectorXd CondensedOperators::condensed_solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != disc_->layout().n_facet())
    throw InputError("condensed_solve: right-hand side has wrong dimension");
  if (rhs.size() == 0)
    return rhs;
  return s_factor_->solve(rhs);
}

Eigen::VectorXd CondensedOperators::solve_A_lambda(const Eigen::VectorXd& rhs) const {
  if (rhs.size() == 0)
    return rhs;
  return a_factor_->solve(rhs);
}

Eigen::VectorXd CondensedOperators::solve_Sbar_lambda(const Eigen::VectorXd& rhs) const {
  if (!has_bar_)
    throw CondensationError("condensation: " + bar_reason_);
  if (rhs.size() == 0)
    return rhs;
  return sbar_factor_->solve(rhs);
}

Eigen::VectorXd reconstruct_velocity(const Discretization& disc, const Eigen::VectorXd& psi,
                                     const Eigen::VectorXd& lambda) {
  const auto& lay = disc.layout();
  if (psi.size() != lay.n_scalar() || lambda.size() != lay.n_facet())
    throw InputError("reconstruct_velocity: dimension mismatch");
  const Eigen::VectorXd rhs = apply_B(disc, psi) + apply_E(disc, lambda);
  const int nv = lay.vector_local();
  Eigen::VectorXd v(lay.n_vector());
  for (int e = 0; e < lay.num_elements(); ++e)
    v.segment(e * nv, nv) = -disc.operators().bM[e].llt().solve(rhs.segment(e * nv, nv));
  return v;
}

} // namespace wvhdg
