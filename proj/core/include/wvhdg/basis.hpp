#pragma once

#include "wvhdg/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace wvhdg {

/// Highest polynomial degree any quadrature rule here integrates exactly.
inline constexpr int kMaxQuadratureOrder = 60;

/// Rule on the reference triangle {x, y >= 0, x + y <= 1}; weights sum to 1/2.
struct QuadratureRule {
  int order = 0;
  std::vector<Point> points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule on the reference segment [0, 1]; weights sum to 1.
struct SegmentRule {
  int order = 0;
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre with the fewest points exact for degree <= order.
SegmentRule segment_quadrature(int order);

/// Collapsed (Duffy) Gauss-Legendre product rule, exact for total degree <= order.
QuadratureRule triangle_quadrature(int order);

inline int scalar_dim(int p) { return (p + 1) * (p + 2) / 2; }

struct BasisTable {
  Eigen::MatrixXd values; ///< (points x dim)
  Eigen::MatrixXd dx;     ///< reference-space d/dx
  Eigen::MatrixXd dy;     ///< reference-space d/dy
};

/// L2-orthonormal (Dubiner) basis of P^p on the reference triangle.
///
/// Functions are ordered by total degree, so the first scalar_dim(q) of them span
/// P^q for every q <= p, and function 0 is the constant sqrt(2).
class TriangleBasis {
public:
  explicit TriangleBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  /// Throws DomainError if the point lies outside the reference triangle (tolerance 1e-12).
  void evaluate(const Point& ref, Eigen::Ref<Eigen::VectorXd> values) const;
  void evaluate(const Point& ref, Eigen::Ref<Eigen::VectorXd> values, Eigen::Ref<Eigen::VectorXd> dx,
                Eigen::Ref<Eigen::VectorXd> dy) const;

  BasisTable tabulate(const std::vector<Point>& ref_points) const;

private:
  void evaluate_raw(const Point& ref, double* values, double* dx, double* dy) const;

  int degree_;
  int dim_;
  std::vector<double> inv_norm_;
};

/// L2-orthonormal Legendre basis of P^p on [0, 1].
class SegmentBasis {
public:
  explicit SegmentBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }

  void evaluate(double s, Eigen::Ref<Eigen::VectorXd> values) const;
  Eigen::MatrixXd tabulate(const Eigen::VectorXd& points) const;

private:
  int degree_;
};

/// Affine map from the reference triangle onto element K: x = x0 + J * xi.
struct ElementGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_jacobian;
  double det = 0.0; ///< 2 * area

  ElementGeometry() = default;
  ElementGeometry(const Mesh& mesh, int element);

  Point to_physical(const Point& ref) const { return origin + jacobian * ref; }
  Point to_reference(const Point& x) const { return inverse_jacobian * (x - origin); }
};

/// Reference coordinates of the facet quadrature points seen from each local facet.
///
/// Facets are parametrized from their lower to their higher global vertex index; when
/// an element traverses a local facet against that direction the points are reversed so
/// both neighbours see the same physical point at the same index.
struct TraceTables {
  SegmentRule rule;
  /// [local facet][flipped] -> reference points
  std::array<std::array<std::vector<Point>, 2>, 3> points;
  /// [local facet][flipped] -> basis values (points x dim)
  std::array<std::array<Eigen::MatrixXd, 2>, 3> values;

  TraceTables(const TriangleBasis& basis, int order);
};

/// Whether element e walks local facet i from the higher to the lower global vertex.
bool facet_flipped(const Mesh& mesh, int element, int local);

} // namespace wvhdg
