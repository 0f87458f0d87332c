#pragma once

#include "wvhdg/config.hpp"
#include "wvhdg/hdg_ops.hpp"

#include <string>
#include <vector>

namespace wvhdg {

struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;

  bool operator==(const FieldSample&) const = default;
};

/// Values of a discontinuous degree-q field at the equispaced lattice points of every element
/// (q + 1 points per edge; the centroid for q = 0), element by element.
std::vector<FieldSample> sample_field(const Discretization& disc, const TriangleBasis& basis,
                                      const Eigen::VectorXd& coeffs);

/// CSV "x,y,value" with 17 significant digits, or legacy VTK with per-vertex values averaged
/// over the elements sharing the vertex (visualization only).
void export_field(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                  const std::string& path, OutputFormat format);

std::vector<FieldSample> read_field_csv(const std::string& path);

/// Field value at x; on shared edges the lowest-index element containing x wins.
double evaluate_at(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& coeffs,
                   const Point& x);

} // namespace wvhdg
