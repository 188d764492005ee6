#pragma once

#include <functional>

#include "pbf/charges.hpp"
#include "pbf/ion_model.hpp"

namespace pbf {

/// Analytic Dirichlet data on the outer box boundary.  An empty function is
/// the homogeneous trace; the zero case short-circuits several solves.
struct BoundaryTrace {
  std::function<double(const Vec3&)> fn;

  bool is_zero() const { return !fn; }
  double operator()(const Vec3& x) const { return fn ? fn(x) : 0.0; }
};

BoundaryTrace zero_trace();
BoundaryTrace constant_trace(double value);
/// slope * (x[axis] - center of the box along that axis)
BoundaryTrace linear_trace(int axis, double slope, const GridSpec& g);

/// Point charges, dielectric pair, mobile-ion model, outer boundary data.
/// An empty ion model is the zero-salt limit (no screening).
struct SolvationSystem {
  PointChargeSet charges;
  double eps_minus = 1.0;
  double eps_plus = 80.0;
  IonModel ions;
  BoundaryTrace boundary;
};

/// Full validity check used by user-facing entry points: positive and
/// distinct dielectric pair, charges present.  Library tests may bypass it to
/// exercise the eps_minus == eps_plus degenerate mode.
void validate_system(const SolvationSystem& sys);

struct SolveParams {
  double newton_tol = 1e-9;   // relative residual
  int max_newton = 30;
  double cg_tol = 1e-10;
  int cg_max_iter = 50000;
};

}  // namespace pbf
