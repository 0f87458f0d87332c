#pragma once

#include "wvhdg/hdg_ops.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace wvhdg {

/// Parameters a set of condensed operators is built for.
struct SchemeParameters {
  double c = 1.0;
  double delta = 0.0;
  double dt = 1.0;
  double gamma = 0.5;
  double beta = 0.25;

  bool operator==(const SchemeParameters&) const = default;
};

/// mu = c^2 dt^2 beta + delta gamma dt
double newmark_mu(const SchemeParameters& params);

/// Schur-complement operators of the Newmark-HDG scheme.
///
///   S_psi   = S + B^T bM^-1 B                 (element blocks)
///   A_lam   = G + E^T bM^-1 E                 (global facet matrix)
///   R_lam   = F + B^T bM^-1 E                 (element x facet blocks)
///   (M + mu S_psi) Y = mu R_lam,  bM X = E - B Y
///   S_psi Ybar = R_lam,           bM Xbar = E - B Ybar
///   S_lam_mu = G + E^T X - F^T Y,  Sbar_lam = G + E^T Xbar - F^T Ybar
///
/// Refers to the Discretization it was built from, which must outlive it.
class CondensedOperators {
public:
  CondensedOperators(const Discretization& disc, const SchemeParameters& params);

  const Discretization& discretization() const { return *disc_; }
  const SchemeParameters& parameters() const { return params_; }
  double mu() const { return mu_; }

  /// Throws CondensationError unless `params` equals the build parameters.
  void require(const SchemeParameters& params) const;

  const std::vector<Eigen::MatrixXd>& S_psi() const { return s_psi_; }
  const Eigen::MatrixXd& R_lambda(int element, int local) const { return r_[element][local]; }
  const Eigen::MatrixXd& X(int element, int local) const { return x_[element][local]; }
  const Eigen::MatrixXd& Y(int element, int local) const { return y_[element][local]; }
  const Eigen::MatrixXd& Xbar(int element, int local) const { return xbar_[element][local]; }
  const Eigen::MatrixXd& Ybar(int element, int local) const { return ybar_[element][local]; }
  const Eigen::SparseMatrix<double>& A_lambda() const { return a_lambda_; }
  const Eigen::SparseMatrix<double>& S_lambda_mu() const { return s_lambda_mu_; }
  const Eigen::SparseMatrix<double>& Sbar_lambda() const { return sbar_lambda_; }

  /// False when some element block of S_psi is not positive definite.
  bool has_bar() const { return has_bar_; }

  Eigen::VectorXd apply_S_psi(const Eigen::VectorXd& psi) const;
  Eigen::VectorXd apply_R(const Eigen::VectorXd& lambda) const;
  Eigen::VectorXd apply_Rt(const Eigen::VectorXd& psi) const;

  /// (M + mu S_psi)^-1 r, element by element.
  Eigen::VectorXd solve_M_mu_S(const Eigen::VectorXd& r) const;
  /// S_psi^-1 r, element by element.
  Eigen::VectorXd solve_S_psi(const Eigen::VectorXd& r) const;

  /// S_lam_mu^-1 rhs: the only globally coupled solve of a corrector iteration.
  Eigen::VectorXd condensed_solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_A_lambda(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_Sbar_lambda(const Eigen::VectorXd& rhs) const;

private:
  using SparseFactor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
  using Blocks = std::vector<std::array<Eigen::MatrixXd, 3>>;

  const Discretization* disc_;
  SchemeParameters params_;
  double mu_;

  std::vector<Eigen::MatrixXd> s_psi_;
  Blocks r_, x_, y_, xbar_, ybar_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> m_mu_s_factor_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> s_psi_factor_;
  bool has_bar_ = true;
  std::string bar_reason_;

  Eigen::SparseMatrix<double> a_lambda_, s_lambda_mu_, sbar_lambda_;
  std::unique_ptr<SparseFactor> a_factor_, s_factor_, sbar_factor_;
};

inline CondensedOperators build_condensed(const Discretization& disc, const SchemeParameters& params) {
  return CondensedOperators(disc, params);
}

/// V = -bM^-1 (B Psi + E Lambda), element by element.
Eigen::VectorXd reconstruct_velocity(const Discretization& disc, const Eigen::VectorXd& psi,
                                     const Eigen::VectorXd& lambda);

} // namespace wvhdg
