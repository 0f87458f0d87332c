#include "wvhdg/mesh.hpp"

#include "wvhdg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace wvhdg {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

} // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (vertices_.empty() || triangles_.empty())
    throw InputError("mesh: needs at least one vertex and one triangle");
  const int nv = num_vertices();
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    for (int v : triangles_[e])
      if (v < 0 || v >= nv)
        throw InputError("mesh: triangle " + std::to_string(e) + " references vertex " + std::to_string(v) +
                         " out of range");
    if (!(area(static_cast<int>(e)) > 0.0))
      throw InputError("mesh: triangle " + std::to_string(e) + " has non-positive signed area");
  }
  bbox_.lo = vertices_.front();
  bbox_.hi = vertices_.front();
  for (const Point& v : vertices_) {
    bbox_.lo = bbox_.lo.cwiseMin(v);
    bbox_.hi = bbox_.hi.cwiseMax(v);
  }
}

double Mesh::area(int element) const {
  return signed_area(vertex(element, 0), vertex(element, 1), vertex(element, 2));
}

double Mesh::diameter(int element) const {
  const Point& a = vertex(element, 0);
  const Point& b = vertex(element, 1);
  const Point& c = vertex(element, 2);
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

double Mesh::inradius(int element) const {
  const Point& a = vertex(element, 0);
  const Point& b = vertex(element, 1);
  const Point& c = vertex(element, 2);
  const double perimeter = (b - a).norm() + (c - b).norm() + (a - c).norm();
  return 2.0 * area(element) / perimeter;
}

Point Mesh::centroid(int element) const {
  return (vertex(element, 0) + vertex(element, 1) + vertex(element, 2)) / 3.0;
}

Mesh generate_structured_mesh(int n, const BoundingBox& bbox) {
  if (n < 1)
    throw InputError("structured mesh: n must be >= 1, got " + std::to_string(n));
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0))
    throw InputError("structured mesh: bounding box has zero measure");

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      // Pin the last row/column to the box so boundary coordinates are exact.
      const double x = i == n ? bbox.hi.x() : bbox.lo.x() + bbox.width() * i / n;
      const double y = j == n ? bbox.hi.y() : bbox.lo.y() + bbox.height() * j / n;
      vertices.emplace_back(x, y);
    }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh(std::move(vertices), std::move(triangles));
}

MeshMetrics mesh_metrics(const Mesh& mesh) {
  MeshMetrics m;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double d = mesh.diameter(e);
    m.h = std::max(m.h, d);
    m.shape_regularity = std::max(m.shape_regularity, d / mesh.inradius(e));
  }
  return m;
}

Mesh read_mesh(std::istream& in) {
  std::string tag_v, tag_t;
  long nv = -1, nt = -1;
  if (!(in >> tag_v >> nv >> tag_t >> nt) || tag_v != "vertices" || tag_t != "triangles" || nv < 1 || nt < 1)
    throw InputError("mesh import: expected header 'vertices <n> triangles <m>'");
  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices)
    if (!(in >> v.x() >> v.y()))
      throw InputError("mesh import: truncated vertex list");
  std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles)
    if (!(in >> t[0] >> t[1] >> t[2]))
      throw InputError("mesh import: truncated triangle list");
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_elements() << '\n';
  out << std::setprecision(17);
  for (const Point& v : mesh.vertices())
    out << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : mesh.triangles())
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

int locate_point(const Mesh& mesh, const Point& x, double tol) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Point& a = mesh.vertex(e, 0);
    const Point& b = mesh.vertex(e, 1);
    const Point& c = mesh.vertex(e, 2);
    const double area = mesh.area(e);
    const double l0 = signed_area(x, b, c) / area;
    const double l1 = signed_area(a, x, c) / area;
    const double l2 = signed_area(a, b, x) / area;
    if (l0 >= -tol && l1 >= -tol && l2 >= -tol)
      return e;
  }
  return -1;
}

FacetTopology::FacetTopology(const Mesh& mesh, double tau_bar, TauMode mode) : tau_bar_(tau_bar), mode_(mode) {
  if (!(tau_bar > 0.0))
    throw InputError("facet topology: tau_bar must be positive");

  const int ne = mesh.num_elements();
  element_facets_.assign(ne, {-1, -1, -1});
  normals_.resize(ne);

  std::map<std::pair<int, int>, int> edge_to_facet;
  for (int e = 0; e < ne; ++e) {
    const auto& tri = mesh.triangles()[e];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const Point d = mesh.vertices()[b] - mesh.vertices()[a];
      const double len = d.norm();
      normals_[e][i] = Point(d.y(), -d.x()) / len;

      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_to_facet.try_emplace({key.first, key.second}, static_cast<int>(facets_.size()));
      if (inserted) {
        Facet f;
        f.vertices = {key.first, key.second};
        f.elements = {e, -1};
        f.local = {i, -1};
        f.length = len;
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.elements[1] != -1)
          throw TopologyError("facet topology: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is shared by more than two triangles");
        // A consistently oriented neighbour traverses the shared edge in the opposite direction.
        if (mesh.triangles()[f.elements[0]][(f.local[0] + 1) % 3] == a)
          throw TopologyError("facet topology: triangles " + std::to_string(f.elements[0]) + " and " +
                              std::to_string(e) + " have inconsistent orientation");
        f.elements[1] = e;
        f.local[1] = i;
      }
      element_facets_[e][i] = it->second;
    }
  }

  std::vector<int> boundary_vertices;
  for (int fi = 0; fi < num_facets(); ++fi) {
    Facet& f = facets_[fi];
    if (f.elements[1] >= 0) {
      f.kind = FacetKind::Interior;
      f.interior_index = static_cast<int>(interior_facets_.size());
      interior_facets_.push_back(fi);
    } else {
      boundary_vertices.push_back(f.vertices[0]);
      boundary_vertices.push_back(f.vertices[1]);
    }
  }

  // Hanging nodes show up as unmatched edges with another boundary vertex in their interior.
  std::sort(boundary_vertices.begin(), boundary_vertices.end());
  boundary_vertices.erase(std::unique(boundary_vertices.begin(), boundary_vertices.end()), boundary_vertices.end());
  for (const Facet& f : facets_) {
    if (f.kind != FacetKind::Dirichlet)
      continue;
    const Point& a = mesh.vertices()[f.vertices[0]];
    const Point& b = mesh.vertices()[f.vertices[1]];
    const Point d = b - a;
    const double len2 = d.squaredNorm();
    for (int v : boundary_vertices) {
      if (v == f.vertices[0] || v == f.vertices[1])
        continue;
      const Point r = mesh.vertices()[v] - a;
      const double s = r.dot(d) / len2;
      const double cross = std::abs(r.x() * d.y() - r.y() * d.x());
      if (s > 1e-12 && s < 1.0 - 1e-12 && cross <= 1e-12 * len2)
        throw TopologyError("facet topology: vertex " + std::to_string(v) + " hangs on edge (" +
                            std::to_string(f.vertices[0]) + ", " + std::to_string(f.vertices[1]) + ")");
    }
  }

  stab_facet_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      const Facet& cand = facets_[element_facets_[e][i]];
      const Facet& cur = facets_[element_facets_[e][best]];
      const double tol = 1e-12 * std::max(cand.length, cur.length);
      if (cand.length > cur.length + tol ||
          (std::abs(cand.length - cur.length) <= tol && element_facets_[e][i] < element_facets_[e][best]))
        best = i;
    }
    stab_facet_[e] = best;
  }
}

double FacetTopology::tau(int element, int local) const {
  if (mode_ == TauMode::Uniform)
    return tau_bar_;
  return local == stab_facet_[element] ? tau_bar_ : 0.0;
}

std::vector<int> FacetTopology::unstabilized_interior_facets() const {
  std::vector<int> out;
  for (int fi : interior_facets_) {
    const Facet& f = facets_[fi];
    if (tau(f.elements[0], f.local[0]) == 0.0 && tau(f.elements[1], f.local[1]) == 0.0)
      out.push_back(fi);
  }
  return out;
}

} // namespace wvhdg
