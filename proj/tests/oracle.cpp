#include "oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

namespace oracle {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (eig.eigenvalues()[i] + 1.0);
    const double v0 = eig.eigenvectors()(0, i);
    w[i] = v0 * v0; // 2 v0^2 on [-1, 1], halved on [0, 1]
  }
  return {x, w};
}

TriangleRule collapsed_rule(int n) {
  const auto [x, w] = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = x[i];
      r.points.emplace_back(u, x[j] * (1.0 - u));
      r.weights.push_back(w[i] * w[j] * (1.0 - u));
    }
  return r;
}

double monomial_integral(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

Point to_reference(const wvhdg::Mesh& mesh, int e, const Point& x) {
  const Point a0 = mesh.vertex(e, 0);
  Eigen::Matrix2d J;
  J.col(0) = mesh.vertex(e, 1) - a0;
  J.col(1) = mesh.vertex(e, 2) - a0;
  return J.inverse() * (x - a0);
}

namespace {

struct Frame {
  Point a0;
  Eigen::Matrix2d J, Jinv;
  double det;
};

Frame frame(const wvhdg::Mesh& mesh, int e) {
  Frame f;
  f.a0 = mesh.vertex(e, 0);
  f.J.col(0) = mesh.vertex(e, 1) - f.a0;
  f.J.col(1) = mesh.vertex(e, 2) - f.a0;
  f.Jinv = f.J.inverse();
  f.det = f.J.determinant();
  return f;
}

// Orthonormal Legendre polynomials on [0, 1] from the three-term recurrence of P_j(2s - 1).
Eigen::VectorXd legendre(int p, double s) {
  Eigen::VectorXd v(p + 1);
  const double t = 2.0 * s - 1.0;
  double pm = 0.0, pc = 1.0;
  for (int j = 0; j <= p; ++j) {
    v[j] = std::sqrt(2.0 * j + 1.0) * pc;
    const double pn = ((2.0 * j + 1.0) * t * pc - j * pm) / (j + 1.0);
    pm = pc;
    pc = pn;
  }
  return v;
}

} // namespace

DenseOperators assemble(const wvhdg::Discretization& disc, int npts) {
  const wvhdg::Mesh& mesh = disc.mesh();
  const int p = disc.degree();
  const wvhdg::TriangleBasis basis(p);
  const int d = basis.dim();
  const int nf = p + 1;
  const int ne = mesh.num_elements();

  // Interior facets are located by vertex pair; only the numbering is taken from the library.
  std::map<std::pair<int, int>, int> interior;
  for (const auto& f : disc.topology().facets())
    if (f.interior_index >= 0)
      interior[{f.vertices[0], f.vertices[1]}] = f.interior_index;
  const int ni = static_cast<int>(interior.size());

  DenseOperators o;
  o.M = Eigen::MatrixXd::Zero(ne * d, ne * d);
  o.bM = Eigen::MatrixXd::Zero(2 * ne * d, 2 * ne * d);
  o.B = Eigen::MatrixXd::Zero(2 * ne * d, ne * d);
  o.S = Eigen::MatrixXd::Zero(ne * d, ne * d);
  o.E = Eigen::MatrixXd::Zero(2 * ne * d, ni * nf);
  o.F = Eigen::MatrixXd::Zero(ne * d, ni * nf);
  o.G = Eigen::MatrixXd::Zero(ni * nf, ni * nf);

  const TriangleRule rule = collapsed_rule(npts);
  const auto [sx, sw] = gauss_legendre(npts);
  Eigen::VectorXd phi(d), dx(d), dy(d);

  for (int e = 0; e < ne; ++e) {
    const Frame fr = frame(mesh, e);
    const int so = e * d;
    const int vo = 2 * e * d;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.evaluate(rule.points[q], phi, dx, dy);
      const double w = rule.weights[q] * fr.det;
      for (int i = 0; i < d; ++i) {
        const Eigen::Vector2d gi = fr.Jinv.transpose() * Eigen::Vector2d(dx[i], dy[i]);
        for (int j = 0; j < d; ++j) {
          const double m = w * phi[i] * phi[j];
          o.M(so + i, so + j) += m;
          o.bM(vo + i, vo + j) += m;
          o.bM(vo + d + i, vo + d + j) += m;
          o.B(vo + i, so + j) += w * gi.x() * phi[j];
          o.B(vo + d + i, so + j) += w * gi.y() * phi[j];
        }
      }
    }

    const auto& tri = mesh.triangles()[e];
    for (int l = 0; l < 3; ++l) {
      const int ga = tri[(l + 1) % 3];
      const int gb = tri[(l + 2) % 3];
      const Point P = mesh.vertices()[ga];
      const Point Q = mesh.vertices()[gb];
      const double len = (Q - P).norm();
      const Eigen::Vector2d n = Eigen::Vector2d((Q - P).y(), -(Q - P).x()) / len;
      const Point X0 = ga < gb ? P : Q;
      const Point X1 = ga < gb ? Q : P;
      const double tau = disc.topology().tau(e, l);
      const auto it = interior.find({std::min(ga, gb), std::max(ga, gb)});
      const int fo = it == interior.end() ? -1 : it->second * nf;
      for (int q = 0; q < sx.size(); ++q) {
        const Point x = X0 + sx[q] * (X1 - X0);
        basis.evaluate(fr.Jinv * (x - fr.a0), phi);
        const Eigen::VectorXd mu = legendre(p, sx[q]);
        const double w = sw[q] * len;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            o.S(so + i, so + j) += w * tau * phi[i] * phi[j];
        if (fo < 0)
          continue;
        for (int m = 0; m < nf; ++m) {
          for (int i = 0; i < d; ++i) {
            o.E(vo + i, fo + m) -= w * mu[m] * phi[i] * n.x();
            o.E(vo + d + i, fo + m) -= w * mu[m] * phi[i] * n.y();
            o.F(so + i, fo + m) -= w * tau * mu[m] * phi[i];
          }
          for (int r = 0; r < nf; ++r)
            o.G(fo + m, fo + r) += w * tau * mu[m] * mu[r];
        }
      }
    }
  }
  return o;
}

Eigen::MatrixXd nonlinear_mass(const wvhdg::Discretization& disc, const Eigen::VectorXd& theta, double k,
                               int npts) {
  const wvhdg::Mesh& mesh = disc.mesh();
  const wvhdg::TriangleBasis basis(disc.degree());
  const int d = basis.dim();
  const int ne = mesh.num_elements();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(ne * d, ne * d);
  const TriangleRule rule = collapsed_rule(npts);
  Eigen::VectorXd phi(d);
  for (int e = 0; e < ne; ++e) {
    const double det = frame(mesh, e).det;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.evaluate(rule.points[q], phi);
      const double th = phi.dot(theta.segment(e * d, d));
      N.block(e * d, e * d, d, d) += rule.weights[q] * det * (1.0 + 2.0 * k * th) * phi * phi.transpose();
    }
  }
  return N;
}

Eigen::VectorXd load(const wvhdg::Discretization& disc, const std::function<double(const Point&)>& f, int npts) {
  const wvhdg::Mesh& mesh = disc.mesh();
  const wvhdg::TriangleBasis basis(disc.degree());
  const int d = basis.dim();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_elements() * d);
  const TriangleRule rule = collapsed_rule(npts);
  Eigen::VectorXd phi(d);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Frame fr = frame(mesh, e);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.evaluate(rule.points[q], phi);
      b.segment(e * d, d) += rule.weights[q] * fr.det * f(fr.a0 + fr.J * rule.points[q]) * phi;
    }
  }
  return b;
}

double l2_error(const wvhdg::Discretization& disc, const Eigen::VectorXd& coeffs,
                const std::function<double(const Point&)>& f, int npts) {
  const wvhdg::Mesh& mesh = disc.mesh();
  const wvhdg::TriangleBasis basis(disc.degree());
  const int d = basis.dim();
  const TriangleRule rule = collapsed_rule(npts);
  Eigen::VectorXd phi(d);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Frame fr = frame(mesh, e);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.evaluate(rule.points[q], phi);
      const double diff = phi.dot(coeffs.segment(e * d, d)) - f(fr.a0 + fr.J * rule.points[q]);
      sum += rule.weights[q] * fr.det * diff * diff;
    }
  }
  return std::sqrt(sum);
}

Eigen::MatrixXd blocks(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                       const Eigen::MatrixXd& D) {
  Eigen::MatrixXd out(A.rows() + C.rows(), A.cols() + B.cols());
  out << A, B, C, D;
  return out;
}

} // namespace oracle
