#include "wvhdg/hdg_ops.hpp"

#include "wvhdg/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <string>

namespace wvhdg {

DofLayout::DofLayout(const Mesh& mesh, const FacetTopology& topo, int degree)
    : degree_(degree),
      num_elements_(mesh.num_elements()),
      num_interior_(topo.num_interior_facets()),
      scalar_local_(scalar_dim(degree)) {
  if (degree < 0)
    throw InputError("dof layout: degree must be nonnegative");
  if (static_cast<int>(topo.facets().size()) < 3 || topo.num_facets() < mesh.num_elements())
    throw AssemblyError("dof layout: facet topology does not match the mesh");
}

namespace {

int nonlinear_order(int p) { return p == 0 ? 2 : 3 * p; }

} // namespace

ReferenceElement::ReferenceElement(int p)
    : degree(p),
      basis(p),
      facet_basis(p),
      rule(triangle_quadrature(2 * p + 2)),
      table(basis.tabulate(rule.points)),
      traces(basis, 2 * p + 2),
      facet_values(facet_basis.tabulate(traces.rule.points)),
      nonlinear_rule(triangle_quadrature(nonlinear_order(p))),
      nonlinear_values(basis.tabulate(nonlinear_rule.points).values) {}

namespace {

struct PhysicalGradients {
  Eigen::MatrixXd gx, gy;
};

PhysicalGradients push_forward(const BasisTable& t, const ElementGeometry& g) {
  const Eigen::Matrix2d& ji = g.inverse_jacobian;
  return {t.dx * ji(0, 0) + t.dy * ji(1, 0), t.dx * ji(0, 1) + t.dy * ji(1, 1)};
}

} // namespace

AssembledOperators assemble_operators(const Mesh& mesh, const FacetTopology& topo, const DofLayout& layout,
                                      const ReferenceElement& ref) {
  if (layout.num_elements() != mesh.num_elements() || layout.degree() != ref.degree ||
      layout.n_facet() != topo.num_interior_facets() * (ref.degree + 1))
    throw AssemblyError("assemble_operators: dof layout inconsistent with mesh/topology/reference element");

  const int ne = mesh.num_elements();
  const int n = layout.scalar_local();
  const int nf = layout.facet_local();

  AssembledOperators ops;
  ops.M.resize(ne);
  ops.bM.resize(ne);
  ops.B.resize(ne);
  ops.S.resize(ne);
  ops.E.resize(ne);
  ops.F.resize(ne);
  ops.G.assign(topo.num_interior_facets(), Eigen::MatrixXd::Zero(nf, nf));

  const Eigen::VectorXd& w = ref.rule.weights;
  const Eigen::VectorXd& wf = ref.traces.rule.weights;
  const Eigen::MatrixXd& lam = ref.facet_values;
  const Eigen::MatrixXd facet_mass_ref = lam.transpose() * wf.asDiagonal() * lam;

  for (int e = 0; e < ne; ++e) {
    const ElementGeometry geom(mesh, e);
    const double det = geom.det;
    const Eigen::MatrixXd& V = ref.table.values;
    const PhysicalGradients grad = push_forward(ref.table, geom);

    ops.M[e] = det * V.transpose() * w.asDiagonal() * V;
    ops.bM[e] = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ops.bM[e].topLeftCorner(n, n) = ops.M[e];
    ops.bM[e].bottomRightCorner(n, n) = ops.M[e];

    ops.B[e].resize(2 * n, n);
    ops.B[e].topRows(n) = det * grad.gx.transpose() * w.asDiagonal() * V;
    ops.B[e].bottomRows(n) = det * grad.gy.transpose() * w.asDiagonal() * V;

    ops.S[e] = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < 3; ++i) {
      const int fid = topo.element_facet(e, i);
      const Facet& facet = topo.facets()[fid];
      const double len = facet.length;
      const double tau = topo.tau(e, i);
      const Eigen::MatrixXd& T = ref.traces.values[i][facet_flipped(mesh, e, i) ? 1 : 0];
      const Point& nrm = topo.normal(e, i);

      ops.S[e] += tau * len * T.transpose() * wf.asDiagonal() * T;
      if (facet.kind != FacetKind::Interior)
        continue;

      const Eigen::MatrixXd trace_facet = len * T.transpose() * wf.asDiagonal() * lam; // (n x nf)
      Eigen::MatrixXd Eb(2 * n, nf);
      Eb.topRows(n) = -nrm.x() * trace_facet;
      Eb.bottomRows(n) = -nrm.y() * trace_facet;
      ops.E[e][i] = std::move(Eb);
      ops.F[e][i] = -tau * trace_facet;
      ops.G[facet.interior_index] += tau * len * facet_mass_ref;
    }
  }
  return ops;
}

GlobalMatrices to_global(const AssembledOperators& ops, const Mesh& mesh, const FacetTopology& topo,
                         const DofLayout& layout) {
  using Triplet = Eigen::Triplet<double>;
  const int ns = layout.n_scalar(), nv = layout.n_vector(), nfac = layout.n_facet();
  std::vector<Triplet> tM, tbM, tB, tS, tE, tF, tG;
  auto add_block = [](std::vector<Triplet>& out, const Eigen::MatrixXd& blk, int r0, int c0) {
    for (int j = 0; j < blk.cols(); ++j)
      for (int i = 0; i < blk.rows(); ++i)
        if (blk(i, j) != 0.0)
          out.emplace_back(r0 + i, c0 + j, blk(i, j));
  };
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int so = layout.scalar_offset(e), vo = layout.vector_offset(e);
    add_block(tM, ops.M[e], so, so);
    add_block(tbM, ops.bM[e], vo, vo);
    add_block(tB, ops.B[e], vo, so);
    add_block(tS, ops.S[e], so, so);
    for (int i = 0; i < 3; ++i) {
      const Facet& f = topo.facets()[topo.element_facet(e, i)];
      if (f.kind != FacetKind::Interior)
        continue;
      const int fo = layout.facet_offset(f.interior_index);
      add_block(tE, ops.E[e][i], vo, fo);
      add_block(tF, ops.F[e][i], so, fo);
    }
  }
  for (int j = 0; j < topo.num_interior_facets(); ++j)
    add_block(tG, ops.G[j], layout.facet_offset(j), layout.facet_offset(j));

  GlobalMatrices g;
  auto build = [](Eigen::SparseMatrix<double>& m, int r, int c, const std::vector<Triplet>& t) {
    m.resize(r, c);
    m.setFromTriplets(t.begin(), t.end());
  };
  build(g.M, ns, ns, tM);
  build(g.bM, nv, nv, tbM);
  build(g.B, nv, ns, tB);
  build(g.S, ns, ns, tS);
  build(g.E, nv, nfac, tE);
  build(g.F, ns, nfac, tF);
  build(g.G, nfac, nfac, tG);
  return g;
}

Discretization::Discretization(Mesh mesh, int degree, double tau_bar, TauMode mode)
    : mesh_(std::move(mesh)),
      topo_(mesh_, tau_bar, mode),
      layout_(mesh_, topo_, degree),
      ref_(degree) {
  geometry_.reserve(mesh_.num_elements());
  for (int e = 0; e < mesh_.num_elements(); ++e)
    geometry_.emplace_back(mesh_, e);
  ops_ = assemble_operators(mesh_, topo_, layout_, ref_);
}

int Discretization::facet_dof_offset(int element, int local) const {
  const Facet& f = topo_.facets()[topo_.element_facet(element, local)];
  return f.kind == FacetKind::Interior ? layout_.facet_offset(f.interior_index) : -1;
}

namespace {

void check_theta(const Discretization& disc, const Eigen::VectorXd& theta) {
  if (theta.size() != disc.layout().n_scalar())
    throw AssemblyError("nonlinear mass: coefficient has dimension " + std::to_string(theta.size()) +
                        ", expected " + std::to_string(disc.layout().n_scalar()));
}

} // namespace

std::vector<Eigen::MatrixXd> assemble_nonlinear_mass(const Discretization& disc, const Eigen::VectorXd& theta,
                                                     double k) {
  check_theta(disc, theta);
  const auto& ref = disc.reference();
  const Eigen::MatrixXd& V = ref.nonlinear_values;
  const Eigen::VectorXd& w = ref.nonlinear_rule.weights;
  const int n = disc.layout().scalar_local();
  if (k == 0.0)
    return disc.operators().M;
  std::vector<Eigen::MatrixXd> blocks(disc.mesh().num_elements());
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    const Eigen::VectorXd weight = (1.0 + 2.0 * k * (V * theta.segment(e * n, n)).array()).matrix();
    const double wmin = weight.minCoeff();
    if (!(wmin > 0.0))
      throw NondegeneracyError("nonlinear mass: 1 + 2k*theta = " + std::to_string(wmin) + " <= 0 in element " +
                                   std::to_string(e),
                               e);
    blocks[e] = disc.geometry(e).det * V.transpose() * (w.array() * weight.array()).matrix().asDiagonal() * V;
  }
  return blocks;
}

Eigen::VectorXd apply_nonlinear_mass(const Discretization& disc, const Eigen::VectorXd& theta, double k,
                                     const Eigen::VectorXd& x) {
  check_theta(disc, theta);
  const auto& ref = disc.reference();
  const Eigen::MatrixXd& V = ref.nonlinear_values;
  const Eigen::VectorXd& w = ref.nonlinear_rule.weights;
  const int n = disc.layout().scalar_local();
  Eigen::VectorXd y(x.size());
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    const Eigen::ArrayXd weight = 1.0 + 2.0 * k * (V * theta.segment(e * n, n)).array();
    if (!(weight.minCoeff() > 0.0))
      throw NondegeneracyError("nonlinear mass: 1 + 2k*theta <= 0 in element " + std::to_string(e), e);
    const Eigen::VectorXd xq = V * x.segment(e * n, n);
    y.segment(e * n, n) = disc.geometry(e).det * V.transpose() * (w.array() * weight * xq.array()).matrix();
  }
  return y;
}

Eigen::VectorXd apply_nonlinear_defect(const Discretization& disc, const Eigen::VectorXd& theta, double k,
                                       const Eigen::VectorXd& x) {
  check_theta(disc, theta);
  const auto& ref = disc.reference();
  const Eigen::MatrixXd& V = ref.nonlinear_values;
  const Eigen::VectorXd& w = ref.nonlinear_rule.weights;
  const int n = disc.layout().scalar_local();
  Eigen::VectorXd y(x.size());
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    const Eigen::ArrayXd th = (V * theta.segment(e * n, n)).array();
    if (!((1.0 + 2.0 * k * th).minCoeff() > 0.0))
      throw NondegeneracyError("nonlinear mass: 1 + 2k*theta <= 0 in element " + std::to_string(e), e);
    const Eigen::ArrayXd xq = (V * x.segment(e * n, n)).array();
    y.segment(e * n, n) = (-2.0 * k * disc.geometry(e).det) * V.transpose() * (w.array() * th * xq).matrix();
  }
  return y;
}

double min_nondegeneracy(const Discretization& disc, const Eigen::VectorXd& theta, double k) {
  check_theta(disc, theta);
  const Eigen::MatrixXd& V = disc.reference().nonlinear_values;
  const int n = disc.layout().scalar_local();
  double m = std::numeric_limits<double>::infinity();
  for (int e = 0; e < disc.mesh().num_elements(); ++e)
    m = std::min(m, (1.0 + 2.0 * k * (V * theta.segment(e * n, n)).array()).minCoeff());
  return m;
}

Eigen::VectorXd assemble_load(const Discretization& disc, const SpaceTimeFunction& f, double t, int order) {
  const auto& ref = disc.reference();
  const int n = disc.layout().scalar_local();
  const bool own_rule = order >= 0 && order != ref.rule.order;
  const QuadratureRule rule = own_rule ? triangle_quadrature(order) : ref.rule;
  const Eigen::MatrixXd V = own_rule ? ref.basis.tabulate(rule.points).values : ref.table.values;
  Eigen::VectorXd out(disc.layout().n_scalar());
  Eigen::VectorXd fq(rule.size());
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    for (int q = 0; q < rule.size(); ++q)
      fq[q] = rule.weights[q] * f(g.to_physical(rule.points[q]), t);
    out.segment(e * n, n) = g.det * V.transpose() * fq;
  }
  return out;
}

Eigen::VectorXd apply_block_diagonal(const std::vector<Eigen::MatrixXd>& blocks, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    y.segment(off, b.rows()).noalias() = b * x.segment(off, b.cols());
    off += b.rows();
  }
  return y;
}

Eigen::VectorXd apply_B(const Discretization& disc, const Eigen::VectorXd& psi) {
  const auto& lay = disc.layout();
  Eigen::VectorXd y(lay.n_vector());
  for (int e = 0; e < lay.num_elements(); ++e)
    y.segment(lay.vector_offset(e), lay.vector_local()).noalias() =
        disc.operators().B[e] * psi.segment(lay.scalar_offset(e), lay.scalar_local());
  return y;
}

Eigen::VectorXd apply_Bt(const Discretization& disc, const Eigen::VectorXd& vel) {
  const auto& lay = disc.layout();
  Eigen::VectorXd y(lay.n_scalar());
  for (int e = 0; e < lay.num_elements(); ++e)
    y.segment(lay.scalar_offset(e), lay.scalar_local()).noalias() =
        disc.operators().B[e].transpose() * vel.segment(lay.vector_offset(e), lay.vector_local());
  return y;
}

namespace {

/// y[rows of element] += blocks[e][i] * x[facet dofs]  (or the transpose).
template <bool Transpose>
Eigen::VectorXd apply_element_facet(const Discretization& disc, const std::vector<std::array<Eigen::MatrixXd, 3>>& blk,
                                    const Eigen::VectorXd& x, int row_size, bool vector_rows) {
  const auto& lay = disc.layout();
  const int nf = lay.facet_local();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(Transpose ? lay.n_facet() : row_size);
  for (int e = 0; e < lay.num_elements(); ++e) {
    const int ro = vector_rows ? lay.vector_offset(e) : lay.scalar_offset(e);
    const int rn = vector_rows ? lay.vector_local() : lay.scalar_local();
    for (int i = 0; i < 3; ++i) {
      const int fo = disc.facet_dof_offset(e, i);
      if (fo < 0)
        continue;
      if constexpr (Transpose)
        y.segment(fo, nf).noalias() += blk[e][i].transpose() * x.segment(ro, rn);
      else
        y.segment(ro, rn).noalias() += blk[e][i] * x.segment(fo, nf);
    }
  }
  return y;
}

} // namespace

Eigen::VectorXd apply_E(const Discretization& disc, const Eigen::VectorXd& lambda) {
  return apply_element_facet<false>(disc, disc.operators().E, lambda, disc.layout().n_vector(), true);
}

Eigen::VectorXd apply_Et(const Discretization& disc, const Eigen::VectorXd& vel) {
  return apply_element_facet<true>(disc, disc.operators().E, vel, disc.layout().n_vector(), true);
}

Eigen::VectorXd apply_F(const Discretization& disc, const Eigen::VectorXd& lambda) {
  return apply_element_facet<false>(disc, disc.operators().F, lambda, disc.layout().n_scalar(), false);
}

Eigen::VectorXd apply_Ft(const Discretization& disc, const Eigen::VectorXd& psi) {
  return apply_element_facet<true>(disc, disc.operators().F, psi, disc.layout().n_scalar(), false);
}

Eigen::VectorXd apply_G(const Discretization& disc, const Eigen::VectorXd& lambda) {
  const auto& lay = disc.layout();
  const int nf = lay.facet_local();
  Eigen::VectorXd y(lay.n_facet());
  for (int j = 0; j < disc.topology().num_interior_facets(); ++j)
    y.segment(j * nf, nf).noalias() = disc.operators().G[j] * lambda.segment(j * nf, nf);
  return y;
}

namespace {

int default_smooth_order(const Discretization& disc, int order) { return order >= 0 ? order : 2 * disc.degree() + 6; }

} // namespace

HdgProjection hdg_project(const Discretization& disc, const ScalarFunction& psi, const VectorFunction& v, int order) {
  order = default_smooth_order(disc, order);
  const Mesh& mesh = disc.mesh();
  const auto& topo = disc.topology();
  const auto& lay = disc.layout();
  const auto& ref = disc.reference();
  const int p = disc.degree();
  const int n = lay.scalar_local();
  const int m = p >= 1 ? scalar_dim(p - 1) : 0; // dim P^{p-1}
  const int nf = lay.facet_local();

  const QuadratureRule rule = triangle_quadrature(order);
  const Eigen::MatrixXd V = ref.basis.tabulate(rule.points).values;
  const TraceTables traces(ref.basis, order);
  const Eigen::MatrixXd L = ref.facet_basis.tabulate(traces.rule.points);
  const Eigen::VectorXd& wf = traces.rule.weights;

  HdgProjection out;
  out.psi.resize(lay.n_scalar());
  out.v.resize(lay.n_vector());
  out.lambda = Eigen::VectorXd::Zero(lay.n_facet());

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3 * n, 3 * n); // unknowns [psi | vx | vy]
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * n);
    int row = 0;

    // Element moments against P^{p-1}: mass matrix is det * I in the orthonormal basis.
    Eigen::VectorXd psi_q(rule.size()), vx_q(rule.size()), vy_q(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = g.to_physical(rule.points[q]);
      psi_q[q] = rule.weights[q] * psi(x);
      const Point vq = v(x);
      vx_q[q] = rule.weights[q] * vq.x();
      vy_q[q] = rule.weights[q] * vq.y();
    }
    const Eigen::MatrixXd Mq = V.transpose() * rule.weights.asDiagonal() * V; // exact reference mass
    for (int comp = 0; comp < 3; ++comp) {
      const Eigen::VectorXd& fq = comp == 0 ? psi_q : (comp == 1 ? vx_q : vy_q);
      const Eigen::VectorXd moments = V.transpose() * fq;
      for (int i = 0; i < m; ++i) {
        A.block(row, comp * n, 1, n) = Mq.row(i);
        rhs[row] = moments[i];
        ++row;
      }
    }

    // Flux condition on each facet against P^p(F).
    for (int i = 0; i < 3; ++i) {
      const Facet& facet = topo.facets()[topo.element_facet(e, i)];
      const int flip = facet_flipped(mesh, e, i) ? 1 : 0;
      const auto& pts = traces.points[i][flip];
      const Eigen::MatrixXd T = ref.basis.tabulate(pts).values;
      const Point& nrm = topo.normal(e, i);
      const double tau = topo.tau(e, i);
      const double len = facet.length;

      Eigen::VectorXd psi_f(traces.rule.size()), vn_f(traces.rule.size());
      for (int q = 0; q < traces.rule.size(); ++q) {
        const Point x = g.to_physical(pts[q]);
        psi_f[q] = psi(x);
        vn_f[q] = v(x).dot(nrm);
      }
      const Eigen::VectorXd pim = L.transpose() * (wf.array() * psi_f.array()).matrix(); // Pi_M coefficients
      if (facet.kind == FacetKind::Interior)
        out.lambda.segment(lay.facet_offset(facet.interior_index), nf) = pim;

      const Eigen::MatrixXd TL = len * L.transpose() * wf.asDiagonal() * T; // (nf x n)
      const Eigen::VectorXd vn_mom = len * L.transpose() * (wf.array() * vn_f.array()).matrix();
      for (int l = 0; l < nf; ++l) {
        A.block(row, 0, 1, n) = -tau * TL.row(l);
        A.block(row, n, 1, n) = nrm.x() * TL.row(l);
        A.block(row, 2 * n, 1, n) = nrm.y() * TL.row(l);
        rhs[row] = vn_mom[l] - tau * len * pim[l];
        ++row;
      }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
      throw ProjectionError("hdg_project: singular local system in element " + std::to_string(e), e);
    const Eigen::VectorXd sol = lu.solve(rhs);
    out.psi.segment(lay.scalar_offset(e), n) = sol.head(n);
    out.v.segment(lay.vector_offset(e), 2 * n) = sol.tail(2 * n);
  }
  return out;
}

Eigen::VectorXd b_form_smooth(const Discretization& disc, const VectorFunction& v, int order) {
  order = default_smooth_order(disc, order);
  const Mesh& mesh = disc.mesh();
  const auto& topo = disc.topology();
  const auto& ref = disc.reference();
  const int n = disc.layout().scalar_local();
  const QuadratureRule rule = triangle_quadrature(order);
  const BasisTable tab = ref.basis.tabulate(rule.points);
  const TraceTables traces(ref.basis, order);
  const Eigen::VectorXd& wf = traces.rule.weights;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(disc.layout().n_scalar());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    const PhysicalGradients grad = push_forward(tab, g);
    Eigen::VectorXd vx(rule.size()), vy(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Point vq = v(g.to_physical(rule.points[q]));
      vx[q] = rule.weights[q] * vq.x();
      vy[q] = rule.weights[q] * vq.y();
    }
    Eigen::VectorXd acc = -g.det * (grad.gx.transpose() * vx + grad.gy.transpose() * vy);
    for (int i = 0; i < 3; ++i) {
      const int flip = facet_flipped(mesh, e, i) ? 1 : 0;
      const auto& pts = traces.points[i][flip];
      const Eigen::MatrixXd& T = traces.values[i][flip];
      const Point& nrm = topo.normal(e, i);
      const double len = topo.facets()[topo.element_facet(e, i)].length;
      Eigen::VectorXd vn(traces.rule.size());
      for (int q = 0; q < traces.rule.size(); ++q)
        vn[q] = wf[q] * v(g.to_physical(pts[q])).dot(nrm);
      acc += len * T.transpose() * vn;
    }
    out.segment(e * n, n) = acc;
  }
  return out;
}

Eigen::VectorXd s_form_smooth(const Discretization& disc, const ScalarFunction& psi, int order) {
  order = default_smooth_order(disc, order);
  const Mesh& mesh = disc.mesh();
  const auto& topo = disc.topology();
  const auto& ref = disc.reference();
  const int n = disc.layout().scalar_local();
  const TraceTables traces(ref.basis, order);
  const Eigen::VectorXd& wf = traces.rule.weights;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(disc.layout().n_scalar());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry& g = disc.geometry(e);
    for (int i = 0; i < 3; ++i) {
      const double tau = topo.tau(e, i);
      if (tau == 0.0)
        continue;
      const int flip = facet_flipped(mesh, e, i) ? 1 : 0;
      const auto& pts = traces.points[i][flip];
      const Eigen::MatrixXd& T = traces.values[i][flip];
      const double len = topo.facets()[topo.element_facet(e, i)].length;
      Eigen::VectorXd f(traces.rule.size());
      for (int q = 0; q < traces.rule.size(); ++q)
        f[q] = wf[q] * psi(g.to_physical(pts[q]));
      out.segment(e * n, n) += tau * len * T.transpose() * f;
    }
  }
  return out;
}

Eigen::VectorXd l2_project(const Discretization& disc, const ScalarFunction& f, int order) {
  order = default_smooth_order(disc, order);
  const Eigen::VectorXd load = assemble_load(
      disc, [&f](const Point& x, double) { return f(x); }, 0.0, order);
  Eigen::VectorXd out(load.size());
  const int n = disc.layout().scalar_local();
  for (int e = 0; e < disc.mesh().num_elements(); ++e)
    out.segment(e * n, n) = disc.operators().M[e].llt().solve(load.segment(e * n, n));
  return out;
}

double evaluate_scalar(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                       int element, const Point& x) {
  Eigen::VectorXd v(basis.dim());
  Point ref = disc.geometry(element).to_reference(x);
  // Clamp round-off so points on element boundaries stay inside the reference triangle.
  ref = ref.cwiseMax(0.0);
  if (ref.sum() > 1.0)
    ref /= ref.sum();
  basis.evaluate(ref, v);
  return v.dot(coeffs.segment(static_cast<Eigen::Index>(element) * basis.dim(), basis.dim()));
}

} // namespace wvhdg
