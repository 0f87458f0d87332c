#include "wvhdg/analysis.hpp"

#include "wvhdg/condensation.hpp"
#include "wvhdg/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace wvhdg {

namespace {

int degree_from_dim(int dim) {
  int q = 0;
  while (scalar_dim(q) < dim)
    ++q;
  if (scalar_dim(q) != dim)
    throw InputError("coefficient block size " + std::to_string(dim) + " is not a polynomial space dimension");
  return q;
}

double scalar_l2_error(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                       const ScalarFunction& exact, int order) {
  const int ne = disc.mesh().num_elements();
  const int d = basis.dim();
  if (coeffs.size() != static_cast<Eigen::Index>(ne) * d)
    throw InputError("l2_error: coefficient vector has wrong dimension");
  const QuadratureRule rule = triangle_quadrature(order >= 0 ? order : 2 * basis.degree() + 4);
  const Eigen::MatrixXd V = basis.tabulate(rule.points).values;
  double sum = 0.0;
  for (int e = 0; e < ne; ++e) {
    const ElementGeometry& g = disc.geometry(e);
    const Eigen::VectorXd uh = V * coeffs.segment(static_cast<Eigen::Index>(e) * d, d);
    for (int q = 0; q < rule.size(); ++q) {
      const double diff = exact(g.to_physical(rule.points[q])) - uh[q];
      sum += rule.weights[q] * std::abs(g.det) * diff * diff;
    }
  }
  return std::sqrt(sum);
}

} // namespace

double PostprocessedField::evaluate(const Discretization& disc, int element, const Point& x) const {
  return evaluate_scalar(disc, basis, coeffs, element, x);
}

PostprocessedField postprocess(const Discretization& disc, const Eigen::VectorXd& psi, const Eigen::VectorXd& v) {
  const auto& lay = disc.layout();
  if (psi.size() != lay.n_scalar() || v.size() != lay.n_vector())
    throw InputError("postprocess: dimension mismatch");
  const int p = disc.degree();
  const int n = lay.scalar_local();

  PostprocessedField out;
  out.degree = p + 1;
  out.basis = TriangleBasis(p + 1);
  const int d = out.basis.dim();
  out.coeffs.resize(static_cast<Eigen::Index>(lay.num_elements()) * d);

  const QuadratureRule rule = triangle_quadrature(2 * p + 2);
  const BasisTable hi = out.basis.tabulate(rule.points);
  const Eigen::MatrixXd lo = disc.reference().basis.tabulate(rule.points).values;
  const Eigen::VectorXd& w = rule.weights;

  for (int e = 0; e < lay.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    const double det = std::abs(g.det);
    const Eigen::Matrix2d& ji = g.inverse_jacobian;
    const Eigen::MatrixXd gx = hi.dx * ji(0, 0) + hi.dy * ji(1, 0);
    const Eigen::MatrixXd gy = hi.dx * ji(0, 1) + hi.dy * ji(1, 1);
    const Eigen::VectorXd vx = lo * v.segment(2 * e * n, n);
    const Eigen::VectorXd vy = lo * v.segment(2 * e * n + n, n);
    const Eigen::VectorXd ph = lo * psi.segment(e * n, n);

    // The constant is the first hierarchical function; all others have zero mean.
    const Eigen::VectorXd dw = det * w;
    const double mean_h = dw.dot(ph);
    const double mean_0 = dw.dot(hi.values.col(0));
    Eigen::VectorXd a(d);
    a[0] = mean_h / mean_0;
    if (d > 1) {
      const Eigen::MatrixXd Gx = gx.rightCols(d - 1);
      const Eigen::MatrixXd Gy = gy.rightCols(d - 1);
      const Eigen::MatrixXd K = Gx.transpose() * dw.asDiagonal() * Gx + Gy.transpose() * dw.asDiagonal() * Gy;
      const Eigen::VectorXd rhs = Gx.transpose() * dw.cwiseProduct(vx) + Gy.transpose() * dw.cwiseProduct(vy);
      const Eigen::LLT<Eigen::MatrixXd> llt(K);
      if (llt.info() != Eigen::Success)
        throw ProjectionError("postprocess: singular gradient system in element " + std::to_string(e), e);
      a.tail(d - 1) = llt.solve(rhs);
    }
    out.coeffs.segment(static_cast<Eigen::Index>(e) * d, d) = a;
  }
  return out;
}

double postprocess_residual(const Discretization& disc, const PostprocessedField& field, const Eigen::VectorXd& v) {
  const auto& lay = disc.layout();
  const int p = disc.degree();
  const int n = lay.scalar_local();
  const int d = field.basis.dim();
  const QuadratureRule rule = triangle_quadrature(2 * p + 2);
  const BasisTable hi = field.basis.tabulate(rule.points);
  const Eigen::MatrixXd lo = disc.reference().basis.tabulate(rule.points).values;
  double worst = 0.0;
  for (int e = 0; e < lay.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    const Eigen::VectorXd dw = std::abs(g.det) * rule.weights;
    const Eigen::Matrix2d& ji = g.inverse_jacobian;
    const Eigen::MatrixXd gx = hi.dx * ji(0, 0) + hi.dy * ji(1, 0);
    const Eigen::MatrixXd gy = hi.dx * ji(0, 1) + hi.dy * ji(1, 1);
    const Eigen::VectorXd a = field.coeffs.segment(static_cast<Eigen::Index>(e) * d, d);
    const Eigen::VectorXd rx = gx * a - lo * v.segment(2 * e * n, n);
    const Eigen::VectorXd ry = gy * a - lo * v.segment(2 * e * n + n, n);
    const Eigen::VectorXd res = gx.transpose() * dw.cwiseProduct(rx) + gy.transpose() * dw.cwiseProduct(ry);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& psi, const ScalarFunction& exact, int order) {
  const int dim = static_cast<int>(psi.size() / std::max(1, disc.mesh().num_elements()));
  if (dim == disc.reference().basis.dim())
    return scalar_l2_error(disc, disc.reference().basis, psi, exact, order);
  return scalar_l2_error(disc, TriangleBasis(degree_from_dim(dim)), psi, exact, order);
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& v, const VectorFunction& exact, int order) {
  const auto& lay = disc.layout();
  if (v.size() != lay.n_vector())
    throw InputError("l2_error: vector field has wrong dimension");
  const int n = lay.scalar_local();
  const QuadratureRule rule = triangle_quadrature(order >= 0 ? order : 2 * disc.degree() + 4);
  const Eigen::MatrixXd V = disc.reference().basis.tabulate(rule.points).values;
  double sum = 0.0;
  for (int e = 0; e < lay.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    const Eigen::VectorXd ux = V * v.segment(2 * e * n, n);
    const Eigen::VectorXd uy = V * v.segment(2 * e * n + n, n);
    for (int q = 0; q < rule.size(); ++q) {
      const Point ex = exact(g.to_physical(rule.points[q]));
      const double dx = ex.x() - ux[q];
      const double dy = ex.y() - uy[q];
      sum += rule.weights[q] * std::abs(g.det) * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Discretization& disc, const PostprocessedField& field, const ScalarFunction& exact,
                int order) {
  return scalar_l2_error(disc, field.basis, field.coeffs, exact, order);
}

double l2_norm_scalar(const Discretization& disc, const Eigen::VectorXd& psi) {
  return std::sqrt(std::max(0.0, psi.dot(apply_block_diagonal(disc.operators().M, psi))));
}

double l2_norm_vector(const Discretization& disc, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(apply_block_diagonal(disc.operators().bM, v))));
}

namespace {

/// ||v||^2 + ||tau^1/2 (lambda - psi)||^2_interior + ||tau^1/2 psi||^2_Dirichlet
double stiffness_energy(const Discretization& disc, const Eigen::VectorXd& psi, const Eigen::VectorXd& lam) {
  const auto& ops = disc.operators();
  const Eigen::VectorXd v = reconstruct_velocity(disc, psi, lam);
  return v.dot(apply_block_diagonal(ops.bM, v)) + psi.dot(apply_block_diagonal(ops.S, psi)) +
         2.0 * psi.dot(apply_F(disc, lam)) + lam.dot(apply_G(disc, lam));
}

} // namespace

std::pair<double, double> energy(const Discretization& disc, const State& s, double k, double c) {
  const double c2 = c * c;
  const double e0 = 0.5 * s.dpsi.dot(apply_nonlinear_mass(disc, s.dpsi, k, s.dpsi)) +
                    0.5 * c2 * stiffness_energy(disc, s.psi, s.lam);
  const double e1 = 0.5 * s.ddpsi.dot(apply_nonlinear_mass(disc, s.dpsi, k, s.ddpsi)) +
                    0.5 * c2 * stiffness_energy(disc, s.dpsi, s.dlam);
  return {e0, e1};
}

std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors,
                                                     const std::vector<double>& hs) {
  if (errors.size() != hs.size())
    throw InputError("convergence_rates: errors and mesh sizes differ in length");
  std::vector<std::optional<double>> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(hs[i] > hs[i + 1] && hs[i + 1] > 0.0))
      throw InputError("convergence_rates: mesh sizes must be positive and strictly decreasing");
    if (errors[i] > 0.0 && errors[i + 1] > 0.0 && std::isfinite(errors[i]) && std::isfinite(errors[i + 1]))
      out.emplace_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

namespace {

template <class Get>
std::vector<std::optional<double>> report_rates(const std::vector<ErrorLevel>& levels, Get get) {
  std::vector<std::optional<double>> out(levels.size());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const ErrorLevel& a = levels[i - 1];
    const ErrorLevel& b = levels[i];
    if (!a.failure.empty() || !b.failure.empty())
      continue;
    const std::optional<double> ea = get(a), eb = get(b);
    if (!ea || !eb)
      continue;
    out[i] = convergence_rates({*ea, *eb}, {a.h, b.h})[0];
  }
  return out;
}

} // namespace

std::vector<std::optional<double>> ErrorReport::rates_psi() const {
  return report_rates(levels, [](const ErrorLevel& l) { return std::optional<double>(l.err_psi); });
}

std::vector<std::optional<double>> ErrorReport::rates_v() const {
  return report_rates(levels, [](const ErrorLevel& l) { return std::optional<double>(l.err_v); });
}

std::vector<std::optional<double>> ErrorReport::rates_psistar() const {
  return report_rates(levels, [](const ErrorLevel& l) { return l.err_psistar; });
}

} // namespace wvhdg
