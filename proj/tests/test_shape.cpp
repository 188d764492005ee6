#include <doctest.h>

#include <cmath>

#include "pbf/shape.hpp"

using namespace pbf;

namespace {

GridSpec box4(int n) { return GridSpec({-2, -2, -2}, {2, 2, 2}, {n, n, n}); }

SolvationSystem born(double q, double salt) {
  SolvationSystem sys;
  sys.charges.charges.push_back({{0, 0, 0}, q});
  sys.eps_minus = 1.0;
  sys.eps_plus = 80.0;
  if (salt > 0) sys.ions = make_symmetric_salt(salt);
  sys.boundary = zero_trace();
  return sys;
}

}  // namespace

TEST_CASE("transport at t = 0 is the identity") {
  GridSpec g = box4(25);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_radial_bump({0, 0, 0}, 1.0, 0.4, 1.0);
  LevelSet moved = transported_levelset(ls, v, 0.0);
  for (std::size_t i = 0; i < ls.phi.v.size(); ++i) CHECK(moved.phi.v[i] == ls.phi.v[i]);
}

TEST_CASE("uniform radial transport grows the sphere by t") {
  GridSpec g = box4(41);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_radial_bump({0, 0, 0}, 1.0, 0.5, 1.0);
  const double t = 0.08;
  LevelSet moved = transported_levelset(ls, v, t);
  InterfaceMesh mesh = extract_interface(moved);
  // V is exactly the unit radial direction in the bump plateau around the
  // sphere, so the transported zero set is a sphere of radius 1 + t up to
  // the O(h^2) accuracy of the sampled representation.
  double h = g.hmax();
  double worst = 0.0;
  for (const auto& s : mesh.samples) worst = std::max(worst, std::abs(norm(s.point) - (1.0 + t)));
  CHECK(worst < 0.05 * h);
}

TEST_CASE("tangential transport leaves the interface within O(t^2)") {
  GridSpec g = box4(41);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_tangential_field(ls, 0.35, NormalExtension::SplineGradient);
  for (double t : {0.1, 0.05}) {
    LevelSet moved = transported_levelset(ls, v, t);
    InterfaceMesh mesh = extract_interface(moved);
    double worst = 0.0;
    for (const auto& s : mesh.samples)
      worst = std::max(worst, std::abs(ls.phi.interp(s.point)));
    // the new zero set hugs the old one: transport noise plus representation
    // noise, both far below the t^2 envelope with a unit constant
    CHECK(worst <= std::max(1.0 * t * t, 5e-4));
  }
}

TEST_CASE("tube violation is rejected") {
  GridSpec g = box4(33);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_radial_bump({0, 0, 0}, 1.0, 0.25, 1.0);
  CHECK_THROWS_AS(transported_levelset(ls, v, 2.0), GeometryError);
}

TEST_CASE("uncharged system: both probe and formula vanish") {
  GridSpec g = box4(25);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_radial_bump({0, 0, 0}, 1.0, 0.4, 1.0);
  VariationExperiment exp = fd_shape_derivative(born(0.0, 0.2), ls, v, {0.04, 0.02});
  CHECK(std::abs(exp.formula_value) < 1e-12);
  for (double fd : exp.fd) CHECK(std::abs(fd) < 1e-9);
}

TEST_CASE("radial bump: finite differences meet the surface formula") {
  GridSpec g = box4(49);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  VelocityField v = make_radial_bump({0, 0, 0}, 1.0, 0.5, 1.0);
  VariationExperiment exp = fd_shape_derivative(born(1000.0, 0.0), ls, v, {0.02, 0.01});
  CHECK(exp.discrepancy <= 0.10);

  // central differencing is second order: errors against the extrapolated
  // value contract by ~4 per halving of t
  double e_coarse = std::abs(exp.fd[0] - exp.fd_extrapolated);
  double e_fine = std::abs(exp.fd[1] - exp.fd_extrapolated);
  CHECK(e_coarse >= 3.0 * e_fine);
}

TEST_CASE("tangential bump: suppressed probe, exactly zero formula") {
  GridSpec g = box4(49);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);

  VelocityField radial = make_radial_bump({0, 0, 0}, 1.0, 0.5, 1.0);
  VariationExperiment base = fd_shape_derivative(born(1000.0, 0.0), ls, radial, {0.02, 0.01});

  VelocityField tang = make_tangential_field(ls, 0.4, NormalExtension::NodeGradient);
  VariationExperiment exp = fd_shape_derivative(born(1000.0, 0.0), ls, tang, {0.02, 0.01});

  double q_scale = std::abs(base.formula_value);
  CHECK(std::abs(exp.formula_value) <= 1e-12 * q_scale);
  CHECK(std::abs(exp.fd_extrapolated) <= 0.05 * std::abs(base.fd_extrapolated));
}

TEST_CASE("variation is linear in the velocity field") {
  GridSpec g = box4(41);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);
  SolvationSystem sys = born(1000.0, 0.0);
  PBSolution sol = solve_pb(sys, ls);
  InterfaceMesh mesh = extract_interface(ls);
  SurfaceTraces traces = extract_traces(sol, mesh);
  std::vector<double> q = force_density(traces, sys.ions, sys.eps_minus, sys.eps_plus);

  VelocityField v1 = make_radial_bump({0, 0, 0}, 1.0, 0.5, 1.0);
  VelocityField v2 = make_one_lobe_bump({0, 0, 0}, 1.0, 0.5, 1.0, {1.0, 0, 0}, 0.9);
  const double a = 0.7, b = -1.3;
  VelocityField combo;
  combo.support_radius = 0.5;
  combo.value = [&, a, b](const Vec3& x) { return a * v1(x) + b * v2(x); };

  double lhs = integrate_variation(q, traces, combo);
  double rhs = a * integrate_variation(q, traces, v1) + b * integrate_variation(q, traces, v2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}
