#pragma once

#include <functional>
#include <limits>

#include "pbf/interface_mesh.hpp"
#include "pbf/level_set.hpp"

namespace pbf {

/// Smooth velocity field for boundary perturbations.  Compactly supported in
/// the interface tube; must vanish on the outer box boundary and in a ball
/// around every point charge (the constructors below guarantee this by
/// cutting off in the tube).
struct VelocityField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> jacobian;  // empty -> central differences
  double support_radius = std::numeric_limits<double>::infinity();

  Vec3 operator()(const Vec3& x) const { return value(x); }
  Mat3 grad(const Vec3& x) const;
  double divergence(const Vec3& x) const;
};

/// T_t(X): classical 4-stage Runge-Kutta on dx/dt = V(x) with
/// n = max(8, ceil(|t|/0.01)) uniform steps.
Vec3 flow_map(const VelocityField& v, const Vec3& x0, double t);

/// J_t(X) = det grad T_t, integrated as dJ/dt = (div V o T_t) J alongside the
/// flow; J_0 = 1.
double jacobian_Jt(const VelocityField& v, const Vec3& x0, double t);

/// A_V(t)(X) = J_t (grad T_t)^{-1} (grad T_t)^{-T}, with grad T_t from the
/// variational matrix ODE dG/dt = (grad V o T_t) G and J_t = det G.
Mat3 matrix_AVt(const VelocityField& v, const Vec3& x0, double t);

/// (div V) I - grad V - (grad V)^T: the t-derivative of A_V at t = 0.
Mat3 matrix_AVt_rate_at_zero(const VelocityField& v, const Vec3& x);

/// P = I - n (x) n for a unit normal.  Throws on non-unit input (1e-10).
Mat3 tangential_projector(const Vec3& n);

enum class NormalExtension {
  /// Trilinear interpolation of node centered-difference gradients.  Matches
  /// the normals stored on interface samples, so the projected field is
  /// exactly tangential at every sample point.
  NodeGradient,
  /// Gradient of the C^1 spline view of the level set.  The projected field
  /// is Lipschitz and exactly tangential to every spline level, so flow
  /// transport preserves the smoothed interface up to integrator error
  /// (second order in the step size).
  SplineGradient,
};

/// V = w(phi/d0) (I - n (x) n) W with n extended off the interface via the
/// level-set gradient and w a C^2 bump.  W defaults to a fixed smooth
/// trigonometric field when not supplied.
VelocityField make_tangential_field(const LevelSet& ls, double d0, NormalExtension ext,
                                    std::function<Vec3(const Vec3&)> w = {});

/// Radial C^2 bump: V = A (1 - s^2)^3 r_hat with s = (|x-c| - r0)/width.
VelocityField make_radial_bump(const Vec3& center, double r0, double width, double amplitude);

/// Radial bump windowed to one lobe: extra factor (1 - |x-p|^2/rho^2)^3.
VelocityField make_one_lobe_bump(const Vec3& center, double r0, double width, double amplitude,
                                 const Vec3& lobe_point, double lobe_radius);

/// Rigid rotation omega x (x - c), cut off in the tube |phi| < d0.
VelocityField make_rotation_field(const LevelSet& ls, const Vec3& center, const Vec3& omega,
                                  double d0);

struct DriftReport {
  std::vector<double> t;
  std::vector<double> drift;  // max over samples of |phi(T_t(X))|
  double slope = 0.0;         // log-log slope of drift vs t
  bool all_zero = false;      // every drift below floating-point floor
};

/// Transports interface samples (projected onto the spline zero set) by the
/// flow and measures the worst level-set value afterwards.  Requires >= 3
/// t values and V tangential at the samples (|V.n| <= tangent_tol * |V|;
/// analytic constructions meet the default, fields that are tangential only
/// in a coarser sense must pass a matching tolerance).
DriftReport tangential_drift_check(const LevelSet& ls, const VelocityField& v,
                                   const std::vector<double>& t_values,
                                   double tangent_tol = 1e-10);

/// Volume (node count x cell volume) of the region whose solute/solvent
/// classification flips under backward transport by T_t.
double flipped_volume(const LevelSet& ls, const VelocityField& v, double t);

}  // namespace pbf
