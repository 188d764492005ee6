#include <doctest.h>

#include <cmath>
#include <random>

#include "pbf/fields.hpp"
#include "support/oracles.hpp"

using namespace pbf;

namespace {

GridSpec box4(int n) { return GridSpec({-2, -2, -2}, {2, 2, 2}, {n, n, n}); }

SolvationSystem born_system(double q, double em, double ep) {
  SolvationSystem sys;
  sys.charges.charges.push_back({{0, 0, 0}, q});
  sys.eps_minus = em;
  sys.eps_plus = ep;
  sys.boundary = zero_trace();
  return sys;
}

}  // namespace

TEST_CASE("coulomb potential and gradient") {
  PointChargeSet one;
  one.charges.push_back({{0, 0, 0}, 1.0});
  CHECK(coulomb_potential(one, 1.0, {1, 0, 0}) == doctest::Approx(1.0 / (4.0 * M_PI)));
  CHECK_THROWS_AS(coulomb_potential(one, 1.0, {0, 0, 1e-13}), GeometryError);

  // two equal charges symmetric about the origin: zero gradient there
  PointChargeSet pair;
  pair.charges.push_back({{0.7, 0, 0}, 2.0});
  pair.charges.push_back({{-0.7, 0, 0}, 2.0});
  Vec3 g = coulomb_gradient(pair, 3.0, {0, 0, 0});
  CHECK(norm(g) < 1e-14);

  // superposition at random points
  PointChargeSet a, b, ab;
  a.charges.push_back({{0.3, -0.1, 0.2}, 1.3});
  b.charges.push_back({{-0.4, 0.5, -0.3}, -0.8});
  ab.charges = a.charges;
  ab.charges.push_back(b.charges[0]);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  for (int trial = 0; trial < 10; ++trial) {
    Vec3 x{u(rng), u(rng), u(rng)};
    double lhs = coulomb_potential(ab, 2.0, x);
    double rhs = coulomb_potential(a, 2.0, x) + coulomb_potential(b, 2.0, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("harmonic regular part: zero charges, zero trace") {
  GridSpec g = box4(17);
  PointChargeSet c;
  c.charges.push_back({{0, 0, 0}, 0.0});
  ScalarField h = solve_hat_phi(c, 1.0, zero_trace(), g);
  CHECK(h.max_abs() < 1e-12);
}

TEST_CASE("harmonic regular part obeys the maximum principle") {
  GridSpec g = box4(25);
  PointChargeSet c;
  c.charges.push_back({{0.2, -0.3, 0.1}, 1.0});
  ScalarField h = solve_hat_phi(c, 1.0, zero_trace(), g);
  double bmin = 0.0, bmax = -1e300;
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        if (!g.on_boundary(i, j, k)) continue;
        bmin = std::min(bmin, h.at(i, j, k));
        bmax = std::max(bmax, h.at(i, j, k));
      }
  for (double v : h.v) {
    CHECK(v >= bmin - 1e-10);
    CHECK(v <= bmax + 1e-10);
  }
}

TEST_CASE("harmonic regular part converges under refinement") {
  PointChargeSet c;
  c.charges.push_back({{0, 0, 0}, 1.0});
  auto center_value = [&](int n) {
    GridSpec g = box4(n);
    ScalarField h = solve_hat_phi(c, 1.0, zero_trace(), g);
    return h.interp({0, 0, 0});
  };
  double v1 = center_value(25), v2 = center_value(49);
  double richardson = (4.0 * v2 - v1) / 3.0;
  CHECK(std::abs(v2 - richardson) / std::abs(richardson) < 0.01);
}

TEST_CASE("dielectric-boundary dirichlet field") {
  GridSpec g = box4(33);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);

  SUBCASE("zero trace short-circuits to zero") {
    SolvationSystem sys = born_system(1.0, 1.0, 80.0);
    ScalarField f = solve_phi_gamma_infty(sys, ls);
    CHECK(f.max_abs() == 0.0);
  }

  SUBCASE("equal eps with an affine trace reproduces the trace") {
    SolvationSystem sys = born_system(1.0, 4.0, 4.0);
    sys.boundary = linear_trace(2, 0.5, g);
    ScalarField f = solve_phi_gamma_infty(sys, ls);
    for (int k = 0; k < g.n[2]; k += 4)
      for (int j = 0; j < g.n[1]; j += 4)
        for (int i = 0; i < g.n[0]; i += 4) {
          double expect = sys.boundary(g.pos(i, j, k));
          CHECK(f.at(i, j, k) == doctest::Approx(expect).epsilon(1e-9));
        }
  }

  SUBCASE("discrete maximum principle with a dielectric jump") {
    SolvationSystem sys = born_system(1.0, 1.0, 80.0);
    sys.boundary = linear_trace(2, 0.7, g);
    ScalarField f = solve_phi_gamma_infty(sys, ls);
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < g.n[2]; ++k)
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
          if (!g.on_boundary(i, j, k)) continue;
          lo = std::min(lo, f.at(i, j, k));
          hi = std::max(hi, f.at(i, j, k));
        }
    for (double v : f.v) {
      CHECK(v >= lo - 1e-10);
      CHECK(v <= hi + 1e-10);
    }
  }
}

TEST_CASE("dielectric-boundary coulomb field") {
  GridSpec g = box4(33);
  LevelSet ls = levelset_sphere({0, 0, 0}, 1.0, g);

  SUBCASE("equal eps collapses to the uniform harmonic field") {
    SolvationSystem sys = born_system(1.0, 4.0, 4.0);
    ScalarField u = solve_hat_phi_gamma_infty(sys, ls);
    ScalarField h = solve_hat_phi(sys.charges, sys.eps_minus, zero_trace(), g);
    for (std::size_t i = 0; i < u.v.size(); ++i)
      CHECK(std::abs(u.v[i] - h.v[i]) < 1e-8 * std::max(1.0, h.max_abs()));
  }

  SUBCASE("Born reaction potential matches the radial reference") {
    SolvationSystem sys = born_system(1.0, 1.0, 80.0);
    GridSpec gf = box4(49);
    LevelSet lsf = levelset_sphere({0, 0, 0}, 1.0, gf);
    ScalarField u = solve_hat_phi_gamma_infty(sys, lsf);
    double rout = oracle::equivalent_outer_radius(4, 4, 4);
    oracle::BornSphere ref = oracle::born_sphere_linear(1.0, 1.0, 80.0, 1.0, rout);
    CHECK(std::abs(u.interp({0, 0, 0}) - ref.reaction_at_center) /
              std::abs(ref.reaction_at_center) <
          0.02);
  }

  SUBCASE("linearity: doubling the charge doubles the regular part") {
    SolvationSystem sys = born_system(0.75, 1.0, 80.0);
    ScalarField u1 = solve_hat_phi_gamma_infty(sys, ls);
    SolvationSystem sys2 = born_system(1.5, 1.0, 80.0);
    ScalarField u2 = solve_hat_phi_gamma_infty(sys2, ls);
    double scale = u1.max_abs();
    for (std::size_t i = 0; i < u1.v.size(); ++i)
      CHECK(std::abs(u2.v[i] - 2.0 * u1.v[i]) <= 1e-12 * scale);
  }
}
