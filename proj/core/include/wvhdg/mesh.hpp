#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace wvhdg {

using Point = Eigen::Vector2d;

struct BoundingBox {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double area() const { return width() * height(); }
};

/// Conforming 2D triangulation. Triangles are stored counterclockwise.
class Mesh {
public:
  /// Validates orientation (positive signed area) of every triangle.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const BoundingBox& bbox() const { return bbox_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(triangles_.size()); }

  const Point& vertex(int element, int local) const { return vertices_[triangles_[element][local]]; }
  double area(int element) const;
  double diameter(int element) const;
  double inradius(int element) const;
  Point centroid(int element) const;

private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  BoundingBox bbox_;
};

/// n x n cells, each split along the diagonal from its lower-left to upper-right corner.
/// Vertices are numbered row-major starting at bbox.lo; cell (i, j) yields the lower
/// triangle then the upper triangle.
Mesh generate_structured_mesh(int n, const BoundingBox& bbox = {});

struct MeshMetrics {
  double h = 0.0;                ///< max element diameter
  double shape_regularity = 0.0; ///< max diameter / inradius
};

MeshMetrics mesh_metrics(const Mesh& mesh);

/// Plain-text mesh format: "vertices <n> triangles <m>", n lines "x y", m lines "i j k" (0-based, ccw).
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Barycentric point location; returns the lowest-index element containing x or -1.
int locate_point(const Mesh& mesh, const Point& x, double tol = 1e-12);

enum class FacetKind { Interior, Dirichlet };
enum class TauMode { SingleFacet, Uniform };

struct Facet {
  std::array<int, 2> vertices{};       ///< sorted: vertices[0] < vertices[1]
  std::array<int, 2> elements{-1, -1}; ///< elements[1] == -1 on Dirichlet facets
  std::array<int, 2> local{-1, -1};    ///< local facet index within each adjacent element
  FacetKind kind = FacetKind::Dirichlet;
  double length = 0.0;
  int interior_index = -1; ///< position among interior facets, -1 on Dirichlet facets
};

/// Facet classification, outward normals and stabilization function tau.
///
/// Local facet i of a triangle is the edge opposite its local vertex i, i.e. the edge
/// from local vertex (i+1)%3 to (i+2)%3.
class FacetTopology {
public:
  FacetTopology(const Mesh& mesh, double tau_bar, TauMode mode);

  const std::vector<Facet>& facets() const { return facets_; }
  int num_facets() const { return static_cast<int>(facets_.size()); }
  int num_interior_facets() const { return static_cast<int>(interior_facets_.size()); }
  int num_dirichlet_facets() const { return num_facets() - num_interior_facets(); }
  /// Global facet ids of interior facets, ordered by interior index.
  const std::vector<int>& interior_facets() const { return interior_facets_; }

  int element_facet(int element, int local) const { return element_facets_[element][local]; }
  const Point& normal(int element, int local) const { return normals_[element][local]; }
  /// Local index of the facet carrying tau_bar in single-facet mode.
  int stabilization_facet(int element) const { return stab_facet_[element]; }
  double tau(int element, int local) const;
  double tau_bar() const { return tau_bar_; }
  TauMode mode() const { return mode_; }

  /// Interior facets with tau = 0 from both sides.
  std::vector<int> unstabilized_interior_facets() const;

private:
  std::vector<Facet> facets_;
  std::vector<int> interior_facets_;
  std::vector<std::array<int, 3>> element_facets_;
  std::vector<std::array<Point, 3>> normals_;
  std::vector<int> stab_facet_;
  double tau_bar_;
  TauMode mode_;
};

inline FacetTopology compute_facet_topology(const Mesh& mesh, double tau_bar, TauMode mode) {
  return FacetTopology(mesh, tau_bar, mode);
}

} // namespace wvhdg
