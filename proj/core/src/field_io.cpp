#include "wvhdg/field_io.hpp"

#include "wvhdg/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wvhdg {

namespace {

std::vector<Point> lattice(int q) {
  std::vector<Point> pts;
  if (q == 0) {
    pts.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    return pts;
  }
  for (int j = 0; j <= q; ++j)
    for (int i = 0; i + j <= q; ++i)
      pts.emplace_back(static_cast<double>(i) / q, static_cast<double>(j) / q);
  return pts;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

std::vector<FieldSample> sample_field(const Discretization& disc, const TriangleBasis& basis,
                                      const Eigen::VectorXd& coeffs) {
  const int ne = disc.mesh().num_elements();
  const int d = basis.dim();
  if (coeffs.size() != static_cast<Eigen::Index>(ne) * d)
    throw InputError("sample_field: coefficient vector has wrong dimension");
  const std::vector<Point> ref = lattice(basis.degree());
  const Eigen::MatrixXd V = basis.tabulate(ref).values;
  std::vector<FieldSample> out;
  out.reserve(ref.size() * ne);
  for (int e = 0; e < ne; ++e) {
    const Eigen::VectorXd vals = V * coeffs.segment(static_cast<Eigen::Index>(e) * d, d);
    for (std::size_t q = 0; q < ref.size(); ++q) {
      const Point x = disc.geometry(e).to_physical(ref[q]);
      out.push_back({x.x(), x.y(), vals[static_cast<Eigen::Index>(q)]});
    }
  }
  return out;
}

void export_field(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                  const std::string& path, OutputFormat format) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write '" + path + "'");
  if (format == OutputFormat::Csv) {
    out << "x,y,value\n";
    for (const auto& s : sample_field(disc, basis, coeffs))
      out << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.value) << '\n';
  } else {
    const Mesh& mesh = disc.mesh();
    const int d = basis.dim();
    std::vector<double> sum(mesh.num_vertices(), 0.0);
    std::vector<int> count(mesh.num_vertices(), 0);
    const std::array<Point, 3> corners = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};
    const Eigen::MatrixXd V = basis.tabulate({corners.begin(), corners.end()}).values;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Eigen::VectorXd vals = V * coeffs.segment(static_cast<Eigen::Index>(e) * d, d);
      for (int l = 0; l < 3; ++l) {
        const int v = mesh.triangles()[e][l];
        sum[v] += vals[l];
        ++count[v];
      }
    }
    out << "# vtk DataFile Version 3.0\nwvhdg field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const auto& v : mesh.vertices())
      out << fmt(v.x()) << ' ' << fmt(v.y()) << " 0\n";
    out << "CELLS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
    for (const auto& t : mesh.triangles())
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << mesh.num_elements() << '\n';
    for (int e = 0; e < mesh.num_elements(); ++e)
      out << "5\n";
    out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS value double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.num_vertices(); ++v)
      out << fmt(count[v] ? sum[v] / count[v] : 0.0) << '\n';
  }
  if (!out)
    throw IoError("error while writing '" + path + "'");
}

std::vector<FieldSample> read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value")
    throw InputError("'" + path + "': expected header x,y,value");
  std::vector<FieldSample> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty())
      continue;
    FieldSample s;
    double* dst[3] = {&s.x, &s.y, &s.value};
    const char* p = line.c_str();
    for (int i = 0; i < 3; ++i) {
      char* end = nullptr;
      *dst[i] = std::strtod(p, &end);
      if (end == p || (i < 2 && *end != ',') || (i == 2 && *end != '\0'))
        throw InputError("'" + path + "' line " + std::to_string(number) + ": malformed row");
      p = end + 1;
    }
    out.push_back(s);
  }
  return out;
}

double evaluate_at(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                   const Point& x) {
  const int e = locate_point(disc.mesh(), x, 1e-10);
  if (e < 0)
    throw DomainError("evaluate_at: point outside the mesh");
  return evaluate_scalar(disc, basis, coeffs, e, x);
}

} // namespace wvhdg
