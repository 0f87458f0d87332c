#include "wvhdg/problems.hpp"

#include <cmath>
#include <numbers>

namespace wvhdg {

double manufactured_forcing(const ManufacturedParameters& m, const Point& x, double t) {
  const double s = std::sin(m.ell * x.x()) * std::sin(m.ell * x.y());
  const double psi = m.A * std::sin(m.omega * t) * s;
  const double psi_t = m.A * m.omega * std::cos(m.omega * t) * s;
  const double psi_tt = -m.omega * m.omega * psi;
  const double l2 = 2.0 * m.ell * m.ell; // -Lap = 2 l^2 on sin(l x) sin(l y)
  return (1.0 + 2.0 * m.k * psi_t) * psi_tt + m.c * m.c * l2 * psi + m.delta * l2 * psi_t;
}

ProblemDefinition manufactured_problem(const ManufacturedParameters& m) {
  ProblemDefinition p;
  p.c = m.c;
  p.k = m.k;
  p.delta = m.delta;
  p.T = m.T;
  auto shape = [l = m.ell](const Point& x) { return std::sin(l * x.x()) * std::sin(l * x.y()); };
  const double l2 = 2.0 * m.ell * m.ell;
  p.psi0 = [](const Point&) { return 0.0; };
  p.lap_psi0 = [](const Point&) { return 0.0; };
  p.psi1 = [shape, a = m.A * m.omega](const Point& x) { return a * shape(x); };
  p.lap_psi1 = [shape, a = -l2 * m.A * m.omega](const Point& x) { return a * shape(x); };
  p.forcing = [m](const Point& x, double t) { return manufactured_forcing(m, x, t); };
  p.exact_psi = [m, shape](const Point& x, double t) { return m.A * std::sin(m.omega * t) * shape(x); };
  p.exact_dpsi = [m, shape](const Point& x, double t) { return m.A * m.omega * std::cos(m.omega * t) * shape(x); };
  p.exact_v = [m](const Point& x, double t) {
    const double a = m.A * std::sin(m.omega * t) * m.ell;
    return Point(a * std::cos(m.ell * x.x()) * std::sin(m.ell * x.y()),
                 a * std::sin(m.ell * x.x()) * std::cos(m.ell * x.y()));
  };
  return p;
}

ProblemDefinition delta_problem(const DeltaParameters& d) {
  using std::numbers::pi;
  ProblemDefinition p;
  p.c = d.c;
  p.k = d.k;
  p.delta = d.delta;
  p.T = d.T;
  auto shape = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  p.psi0 = [shape, a = d.a0](const Point& x) { return a * shape(x); };
  p.psi1 = [shape, a = d.a1](const Point& x) { return a * shape(x); };
  p.lap_psi0 = [shape, a = -2.0 * pi * pi * d.a0](const Point& x) { return a * shape(x); };
  p.lap_psi1 = [shape, a = -2.0 * pi * pi * d.a1](const Point& x) { return a * shape(x); };
  return p;
}

double wavefront_forcing(const WavefrontParameters& w, const Point& x, double t) {
  const double r2 = (x - w.center).squaredNorm();
  return w.a / std::sqrt(w.sigma) * std::exp(-w.alpha * t) * std::exp(-r2 / (2.0 * w.sigma * w.sigma));
}

ProblemDefinition wavefront_problem(const WavefrontParameters& w) {
  ProblemDefinition p;
  p.c = w.c;
  p.k = w.k;
  p.delta = w.delta;
  p.T = w.T;
  p.forcing = [w](const Point& x, double t) { return wavefront_forcing(w, x, t); };
  return p;
}

} // namespace wvhdg
