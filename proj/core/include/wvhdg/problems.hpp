#pragma once

#include "wvhdg/time_integrator.hpp"

#include <numbers>

namespace wvhdg {

/// psi = A sin(omega t) sin(l x) sin(l y) on the unit square with the forcing that makes it exact.
struct ManufacturedParameters {
  double c = 100.0;
  double delta = 6e-9;
  double k = 0.5;
  double T = 1.0;
  double A = 1e-2;
  double omega = 3.5 * std::numbers::pi;
  double ell = std::numbers::pi;
};

/// The forcing (1 + 2k psi_t) psi_tt - c^2 Lap psi - delta Lap psi_t of the manufactured solution.
double manufactured_forcing(const ManufacturedParameters& m, const Point& x, double t);

ProblemDefinition manufactured_problem(const ManufacturedParameters& m = {});

/// Unforced problem with psi0 = a0 sin(pi x) sin(pi y), psi1 = a1 sin(pi x) sin(pi y).
struct DeltaParameters {
  double c = 1.0;
  double k = 0.3;
  double delta = 0.0;
  double T = 1.0;
  double a0 = 1e-2;
  double a1 = 1.0;
};

ProblemDefinition delta_problem(const DeltaParameters& d);

/// Zero initial data, forcing a / sqrt(sigma) exp(-alpha t) exp(-|x - (0.5, 0.5)|^2 / (2 sigma^2)).
struct WavefrontParameters {
  double c = 1500.0;
  double delta = 6e-9;
  double k = -10.0;
  double T = 2e-4;
  double a = 400.0;
  double alpha = 5e4;
  double sigma = 3e-2;
  Point center{0.5, 0.5};
};

double wavefront_forcing(const WavefrontParameters& w, const Point& x, double t);

ProblemDefinition wavefront_problem(const WavefrontParameters& w);

} // namespace wvhdg
