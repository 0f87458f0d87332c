#pragma once

#include "wvhdg/mesh.hpp"

#include <Eigen/Core>

#include <random>

namespace fixtures {

/// Structured n x n mesh with interior vertices moved by up to `amount` times the cell size.
inline wvhdg::Mesh jittered_mesh(int n, unsigned seed, double amount = 0.2) {
  const wvhdg::Mesh base = wvhdg::generate_structured_mesh(n);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-amount / n, amount / n);
  auto vertices = base.vertices();
  for (auto& v : vertices)
    if (v.x() > 0.0 && v.x() < 1.0 && v.y() > 0.0 && v.y() < 1.0)
      v += wvhdg::Point(u(rng), u(rng));
  return wvhdg::Mesh(vertices, base.triangles());
}

inline Eigen::VectorXd random_vector(int n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = u(rng);
  return x;
}

} // namespace fixtures
