#pragma once

#include "wvhdg/basis.hpp"
#include "wvhdg/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <vector>

namespace wvhdg {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;
using SpaceTimeFunction = std::function<double(const Point&, double)>;

/// Degrees of freedom of S_h^p (scalar), Q_h^p (vector) and M_h^p (interior facets).
///
/// Element K owns scalar dofs [K*n, (K+1)*n) and vector dofs [2Kn, 2(K+1)n) with the
/// x-components first; interior facet j owns facet dofs [j*(p+1), (j+1)*(p+1)).
class DofLayout {
public:
  DofLayout(const Mesh& mesh, const FacetTopology& topo, int degree);

  int degree() const { return degree_; }
  int num_elements() const { return num_elements_; }
  int scalar_local() const { return scalar_local_; }
  int vector_local() const { return 2 * scalar_local_; }
  int facet_local() const { return degree_ + 1; }

  int n_scalar() const { return num_elements_ * scalar_local_; }
  int n_vector() const { return 2 * n_scalar(); }
  int n_facet() const { return num_interior_ * facet_local(); }

  int scalar_offset(int element) const { return element * scalar_local_; }
  int vector_offset(int element) const { return 2 * element * scalar_local_; }
  int facet_offset(int interior_index) const { return interior_index * facet_local(); }

private:
  int degree_;
  int num_elements_;
  int num_interior_;
  int scalar_local_;
};

/// Basis tables shared by every element of a degree-p discretization.
struct ReferenceElement {
  int degree;
  TriangleBasis basis;
  SegmentBasis facet_basis;
  QuadratureRule rule;           ///< order 2p+2
  BasisTable table;              ///< basis on `rule`
  TraceTables traces;            ///< order 2p+2 facet rule
  Eigen::MatrixXd facet_values;  ///< facet basis on the trace rule points
  QuadratureRule nonlinear_rule; ///< order 3p (2 for p = 0)
  Eigen::MatrixXd nonlinear_values;

  explicit ReferenceElement(int p);
};

/// The seven HDG matrices in element/facet block form.
///
///   M  : (w, psi)_K                  scalar x scalar, per element
///   bM : (r, v)_K                    vector x vector, per element
///   B  : (psi, div r)_K              vector rows x scalar cols, per element
///   S  : (tau psi, w)_dK             scalar x scalar, per element (interior and Dirichlet parts)
///   E  : -(lambda, r.n_K)_F          vector rows x facet cols, per (element, interior facet)
///   F  : -(tau lambda, w)_F          scalar rows x facet cols, per (element, interior facet)
///   G  : (tau lambda, mu)_dK^I       facet x facet, per interior facet (both sides summed)
///
/// E and F slots of Dirichlet facets are empty matrices.
struct AssembledOperators {
  std::vector<Eigen::MatrixXd> M;
  std::vector<Eigen::MatrixXd> bM;
  std::vector<Eigen::MatrixXd> B;
  std::vector<Eigen::MatrixXd> S;
  std::vector<std::array<Eigen::MatrixXd, 3>> E;
  std::vector<std::array<Eigen::MatrixXd, 3>> F;
  std::vector<Eigen::MatrixXd> G;
};

AssembledOperators assemble_operators(const Mesh& mesh, const FacetTopology& topo, const DofLayout& layout,
                                      const ReferenceElement& ref);

/// Global sparse versions of the block operators, shaped as in the matrix ODE
/// (B: n_vector x n_scalar, E: n_vector x n_facet, F: n_scalar x n_facet).
struct GlobalMatrices {
  Eigen::SparseMatrix<double> M, bM, B, S, E, F, G;
};

GlobalMatrices to_global(const AssembledOperators& ops, const Mesh& mesh, const FacetTopology& topo,
                         const DofLayout& layout);

/// Mesh, topology, dof layout, reference tables and assembled operators for one (mesh, p, tau).
class Discretization {
public:
  Discretization(Mesh mesh, int degree, double tau_bar = 1.0, TauMode mode = TauMode::SingleFacet);

  const Mesh& mesh() const { return mesh_; }
  const FacetTopology& topology() const { return topo_; }
  const DofLayout& layout() const { return layout_; }
  const ReferenceElement& reference() const { return ref_; }
  const AssembledOperators& operators() const { return ops_; }
  const ElementGeometry& geometry(int element) const { return geometry_[element]; }
  int degree() const { return layout_.degree(); }

  /// Interior facet dof offset of local facet `local` of `element`, or -1 on Dirichlet facets.
  int facet_dof_offset(int element, int local) const;

private:
  Mesh mesh_;
  FacetTopology topo_;
  DofLayout layout_;
  ReferenceElement ref_;
  std::vector<ElementGeometry> geometry_;
  AssembledOperators ops_;
};

/// Block-diagonal N_h(theta) with element blocks int_K (1 + 2k theta) phi_i phi_j.
/// Throws NondegeneracyError if 1 + 2k theta <= 0 at any quadrature node.
std::vector<Eigen::MatrixXd> assemble_nonlinear_mass(const Discretization& disc, const Eigen::VectorXd& theta,
                                                     double k);

/// y = N_h(theta) x, computed element by element without storing N_h.
Eigen::VectorXd apply_nonlinear_mass(const Discretization& disc, const Eigen::VectorXd& theta, double k,
                                     const Eigen::VectorXd& x);

/// y = (M - N_h(theta)) x = -2k (theta x, w_i); identically zero for k = 0.
/// Also enforces the nondegeneracy guard on theta.
Eigen::VectorXd apply_nonlinear_defect(const Discretization& disc, const Eigen::VectorXd& theta, double k,
                                       const Eigen::VectorXd& x);

/// Minimum of 1 + 2k theta over the nonlinear quadrature nodes.
double min_nondegeneracy(const Discretization& disc, const Eigen::VectorXd& theta, double k);

/// Load vector (f(., t), w_i) with quadrature of order `order` (2p+2 when negative).
Eigen::VectorXd assemble_load(const Discretization& disc, const SpaceTimeFunction& f, double t, int order = -1);

/// Apply block-diagonal / element-facet operators to global vectors.
Eigen::VectorXd apply_block_diagonal(const std::vector<Eigen::MatrixXd>& blocks, const Eigen::VectorXd& x);
Eigen::VectorXd apply_B(const Discretization& disc, const Eigen::VectorXd& psi);
Eigen::VectorXd apply_Bt(const Discretization& disc, const Eigen::VectorXd& vel);
Eigen::VectorXd apply_E(const Discretization& disc, const Eigen::VectorXd& lambda);
Eigen::VectorXd apply_Et(const Discretization& disc, const Eigen::VectorXd& vel);
Eigen::VectorXd apply_F(const Discretization& disc, const Eigen::VectorXd& lambda);
Eigen::VectorXd apply_Ft(const Discretization& disc, const Eigen::VectorXd& psi);
Eigen::VectorXd apply_G(const Discretization& disc, const Eigen::VectorXd& lambda);

/// HDG projection (Pi_S psi, Pi_Q v) and facet L2 projection Pi_M psi on interior facets.
struct HdgProjection {
  Eigen::VectorXd psi;
  Eigen::VectorXd v;
  Eigen::VectorXd lambda;
};

/// Integrals of the smooth arguments use element/facet rules of order `order` (2p+6 when negative).
HdgProjection hdg_project(const Discretization& disc, const ScalarFunction& psi, const VectorFunction& v,
                          int order = -1);

/// b_h(w_i, v) = (w_i, div v)_Th for a smooth field, evaluated as (w_i, v.n)_dK - (grad w_i, v)_K.
Eigen::VectorXd b_form_smooth(const Discretization& disc, const VectorFunction& v, int order = -1);
/// s_h(psi, w_i) = (tau psi, w_i)_dTh for a smooth field.
Eigen::VectorXd s_form_smooth(const Discretization& disc, const ScalarFunction& psi, int order = -1);

/// L2(Omega) projection onto S_h^p.
Eigen::VectorXd l2_project(const Discretization& disc, const ScalarFunction& f, int order = -1);

/// Value of a degree-q scalar field (q may differ from the discretization degree).
double evaluate_scalar(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                       int element, const Point& x);

} // namespace wvhdg
