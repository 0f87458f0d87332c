#pragma once

#include "wvhdg/hdg_ops.hpp"
#include "wvhdg/time_integrator.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wvhdg {

/// Element-wise P^{p+1} reconstruction psi* from (psi_h, v_h).
struct PostprocessedField {
  int degree = 0;
  TriangleBasis basis{0};
  Eigen::VectorXd coeffs; ///< element-major, basis.dim() per element

  double evaluate(const Discretization& disc, int element, const Point& x) const;
};

/// (grad psi*, grad q)_K = (v_h, grad q)_K for q in P^{p+1}(K), and mean(psi*) = mean(psi_h) on K.
PostprocessedField postprocess(const Discretization& disc, const Eigen::VectorXd& psi, const Eigen::VectorXd& v);

/// Residual of the gradient equations of `postprocess` (max abs over elements and test functions).
double postprocess_residual(const Discretization& disc, const PostprocessedField& field, const Eigen::VectorXd& v);

/// L2(Omega) errors by element quadrature of order `order` (2q+4 for a degree-q field when negative).
double l2_error(const Discretization& disc, const Eigen::VectorXd& psi, const ScalarFunction& exact, int order = -1);
double l2_error(const Discretization& disc, const Eigen::VectorXd& v, const VectorFunction& exact, int order = -1);
double l2_error(const Discretization& disc, const PostprocessedField& field, const ScalarFunction& exact,
                int order = -1);

/// Discrete L2 norms sqrt(x^T M x) and sqrt(x^T bM x).
double l2_norm_scalar(const Discretization& disc, const Eigen::VectorXd& psi);
double l2_norm_vector(const Discretization& disc, const Eigen::VectorXd& v);

/// (E^(0), E^(1)) with weight 1 + 2k dpsi_h; the velocities are reconstructed from (Psi, Lambda)
/// and (dPsi, dLambda).
std::pair<double, double> energy(const Discretization& disc, const State& state, double k, double c);

/// slope_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); empty where an error is not positive.
std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors, const std::vector<double>& hs);

struct ErrorLevel {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double err_psi = 0.0;
  double err_v = 0.0;
  std::optional<double> err_psistar;
  double mean_iterations = 0.0;
  std::string failure; ///< nonempty when the level did not complete
};

struct ErrorReport {
  int degree = 0;
  std::vector<ErrorLevel> levels;

  std::vector<std::optional<double>> rates_psi() const;
  std::vector<std::optional<double>> rates_v() const;
  std::vector<std::optional<double>> rates_psistar() const;
};

} // namespace wvhdg
