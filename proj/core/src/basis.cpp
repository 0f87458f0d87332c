#include "wvhdg/basis.hpp"

#include "wvhdg/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

namespace wvhdg {

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxQuadratureOrder)
    throw DomainError("quadrature order " + std::to_string(order) + " unsupported; available orders are 0.." +
                      std::to_string(kMaxQuadratureOrder));
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1)
    x[n / 2] = 0.0;
}

/// Jacobi P_n^{(alpha,0)}(t) and its derivative for n = 0..max_n.
void jacobi(int max_n, double alpha, double t, double* p, double* dp) {
  p[0] = 1.0;
  dp[0] = 0.0;
  if (max_n == 0)
    return;
  p[1] = 0.5 * ((alpha + 2.0) * t + alpha);
  dp[1] = 0.5 * (alpha + 2.0);
  for (int n = 2; n <= max_n; ++n) {
    const double a1 = 2.0 * n * (n + alpha) * (2.0 * n + alpha - 2.0);
    const double a2 = (2.0 * n + alpha - 1.0) * alpha * alpha;
    const double a3 = (2.0 * n + alpha - 2.0) * (2.0 * n + alpha - 1.0) * (2.0 * n + alpha);
    const double a4 = 2.0 * (n + alpha - 1.0) * (n - 1.0) * (2.0 * n + alpha);
    p[n] = ((a2 + a3 * t) * p[n - 1] - a4 * p[n - 2]) / a1;
    dp[n] = (a3 * p[n - 1] + (a2 + a3 * t) * dp[n - 1] - a4 * dp[n - 2]) / a1;
  }
}

constexpr double kRefTol = 1e-12;

} // namespace

SegmentRule segment_quadrature(int order) {
  check_order(order);
  const int n = std::max(1, (order + 2) / 2);
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  SegmentRule rule;
  rule.order = order;
  rule.points = 0.5 * (x.array() + 1.0);
  rule.weights = 0.5 * w;
  return rule;
}

QuadratureRule triangle_quadrature(int order) {
  check_order(order);
  // The collapsed integrand has degree order + 1 in the collapsed direction.
  const int n = std::max(1, (order + 3) / 2);
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  const Eigen::VectorXd u = 0.5 * (x.array() + 1.0);
  const Eigen::VectorXd wu = 0.5 * w;

  QuadratureRule rule;
  rule.order = order;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.resize(n * n);
  int q = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = u[j];
      rule.points.emplace_back(u[i] * (1.0 - v), v);
      rule.weights[q++] = wu[i] * wu[j] * (1.0 - v);
    }
  return rule;
}

TriangleBasis::TriangleBasis(int degree) : degree_(degree), dim_(scalar_dim(degree)) {
  if (degree < 0)
    throw InputError("basis degree must be nonnegative");
  inv_norm_.assign(dim_, 1.0);
  const QuadratureRule rule = triangle_quadrature(2 * degree_);
  std::vector<double> v(dim_);
  std::vector<double> norm2(dim_, 0.0);
  for (int q = 0; q < rule.size(); ++q) {
    evaluate_raw(rule.points[q], v.data(), nullptr, nullptr);
    for (int i = 0; i < dim_; ++i)
      norm2[i] += rule.weights[q] * v[i] * v[i];
  }
  for (int i = 0; i < dim_; ++i)
    inv_norm_[i] = 1.0 / std::sqrt(norm2[i]);
}

void TriangleBasis::evaluate_raw(const Point& ref, double* values, double* dx, double* dy) const {
  const int p = degree_;
  const double x = ref.x();
  const double y = ref.y();
  const double as = 2.0 * x + y - 1.0; // collapsed Legendre argument times (1 - y)
  const double s = 1.0 - y;

  // Q_i = P_i(a) * s^i as a polynomial in (x, y).
  std::vector<double> q(p + 1), qx(p + 1), qy(p + 1);
  q[0] = 1.0;
  qx[0] = qy[0] = 0.0;
  if (p >= 1) {
    q[1] = as;
    qx[1] = 2.0;
    qy[1] = 1.0;
  }
  for (int n = 1; n < p; ++n) {
    const double c1 = (2.0 * n + 1.0) / (n + 1.0);
    const double c2 = static_cast<double>(n) / (n + 1.0);
    q[n + 1] = c1 * as * q[n] - c2 * s * s * q[n - 1];
    qx[n + 1] = c1 * (2.0 * q[n] + as * qx[n]) - c2 * s * s * qx[n - 1];
    qy[n + 1] = c1 * (q[n] + as * qy[n]) - c2 * (-2.0 * s * q[n - 1] + s * s * qy[n - 1]);
  }

  std::vector<double> pj(p + 1), dpj(p + 1);
  const double t = 2.0 * y - 1.0;
  int k = 0;
  for (int d = 0; d <= p; ++d)
    for (int i = d; i >= 0; --i) {
      const int j = d - i;
      jacobi(j, 2.0 * i + 1.0, t, pj.data(), dpj.data());
      const double scale = inv_norm_.empty() ? 1.0 : inv_norm_[k];
      values[k] = scale * q[i] * pj[j];
      if (dx) {
        dx[k] = scale * qx[i] * pj[j];
        dy[k] = scale * (qy[i] * pj[j] + q[i] * 2.0 * dpj[j]);
      }
      ++k;
    }
}

void TriangleBasis::evaluate(const Point& ref, Eigen::Ref<Eigen::VectorXd> values) const {
  if (ref.x() < -kRefTol || ref.y() < -kRefTol || ref.x() + ref.y() > 1.0 + kRefTol)
    throw DomainError("basis evaluation: point outside the reference triangle");
  evaluate_raw(ref, values.data(), nullptr, nullptr);
}

void TriangleBasis::evaluate(const Point& ref, Eigen::Ref<Eigen::VectorXd> values, Eigen::Ref<Eigen::VectorXd> dx,
                             Eigen::Ref<Eigen::VectorXd> dy) const {
  if (ref.x() < -kRefTol || ref.y() < -kRefTol || ref.x() + ref.y() > 1.0 + kRefTol)
    throw DomainError("basis evaluation: point outside the reference triangle");
  evaluate_raw(ref, values.data(), dx.data(), dy.data());
}

BasisTable TriangleBasis::tabulate(const std::vector<Point>& ref_points) const {
  const int np = static_cast<int>(ref_points.size());
  BasisTable t;
  t.values.resize(np, dim_);
  t.dx.resize(np, dim_);
  t.dy.resize(np, dim_);
  Eigen::VectorXd v(dim_), gx(dim_), gy(dim_);
  for (int q = 0; q < np; ++q) {
    evaluate(ref_points[q], v, gx, gy);
    t.values.row(q) = v.transpose();
    t.dx.row(q) = gx.transpose();
    t.dy.row(q) = gy.transpose();
  }
  return t;
}

SegmentBasis::SegmentBasis(int degree) : degree_(degree) {
  if (degree < 0)
    throw InputError("basis degree must be nonnegative");
}

void SegmentBasis::evaluate(double s, Eigen::Ref<Eigen::VectorXd> values) const {
  if (s < -kRefTol || s > 1.0 + kRefTol)
    throw DomainError("segment basis evaluation: point outside [0, 1]");
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  values[0] = 1.0;
  if (degree_ >= 1)
    values[1] = std::sqrt(3.0) * t;
  for (int n = 2; n <= degree_; ++n) {
    const double p2 = ((2.0 * n - 1.0) * t * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
    values[n] = std::sqrt(2.0 * n + 1.0) * p2;
  }
}

Eigen::MatrixXd SegmentBasis::tabulate(const Eigen::VectorXd& points) const {
  Eigen::MatrixXd out(points.size(), dim());
  Eigen::VectorXd v(dim());
  for (Eigen::Index q = 0; q < points.size(); ++q) {
    evaluate(points[q], v);
    out.row(q) = v.transpose();
  }
  return out;
}

ElementGeometry::ElementGeometry(const Mesh& mesh, int element) {
  origin = mesh.vertex(element, 0);
  jacobian.col(0) = mesh.vertex(element, 1) - origin;
  jacobian.col(1) = mesh.vertex(element, 2) - origin;
  det = jacobian.determinant();
  inverse_jacobian = jacobian.inverse();
}

namespace {

const std::array<Point, 3> kRefVertices = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

} // namespace

TraceTables::TraceTables(const TriangleBasis& basis, int order) : rule(segment_quadrature(order)) {
  Eigen::VectorXd v(basis.dim());
  for (int i = 0; i < 3; ++i) {
    const Point& a = kRefVertices[(i + 1) % 3];
    const Point& b = kRefVertices[(i + 2) % 3];
    for (int flip = 0; flip < 2; ++flip) {
      auto& pts = points[i][flip];
      auto& vals = values[i][flip];
      vals.resize(rule.size(), basis.dim());
      for (int q = 0; q < rule.size(); ++q) {
        const double t = flip ? 1.0 - rule.points[q] : rule.points[q];
        pts.push_back(a + t * (b - a));
        basis.evaluate(pts.back(), v);
        vals.row(q) = v.transpose();
      }
    }
  }
}

bool facet_flipped(const Mesh& mesh, int element, int local) {
  const auto& tri = mesh.triangles()[element];
  return tri[(local + 1) % 3] > tri[(local + 2) % 3];
}

} // namespace wvhdg
