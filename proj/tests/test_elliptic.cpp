#include <doctest.h>

#include <cmath>
#include <random>

#include "pbf/elliptic.hpp"

using namespace pbf;

namespace {

GridSpec unit_box(int n) { return GridSpec({0, 0, 0}, {1, 1, 1}, {n, n, n}); }

LevelSet all_minus(const GridSpec& g) {
  LevelSet ls;
  ls.phi = ScalarField(g, -1.0, "phi");
  return ls;
}

ScalarField random_zero_trace(const GridSpec& g, unsigned seed) {
  ScalarField f(g, 0.0);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 1; k < g.n[2] - 1; ++k)
    for (int j = 1; j < g.n[1] - 1; ++j)
      for (int i = 1; i < g.n[0] - 1; ++i) f.at(i, j, k) = u(rng);
  return f;
}

}  // namespace

TEST_CASE("assembly rules") {
  GridSpec g = unit_box(17);
  LevelSet ls = levelset_sphere({0.5, 0.5, 0.5}, 0.2, g);

  CHECK_THROWS_AS(assemble(ls, -1.0, 80.0), ConfigError);

  SUBCASE("uniform eps reduces to the scaled Laplacian") {
    EllipticOperator op = assemble(all_minus(g), 2.5, 2.5);
    std::vector<double> u(g.size(), 0.0), out;
    u[g.index(4, 4, 4)] = 1.0;
    op.apply(u, out);
    double h2 = g.h(0) * g.h(0);
    CHECK(out[g.index(4, 4, 4)] == doctest::Approx(2.5 * 6.0 / h2));
    CHECK(out[g.index(3, 4, 4)] == doctest::Approx(-2.5 / h2));
  }

  SUBCASE("interface faces carry the harmonic mean") {
    EllipticOperator op = assemble(ls, 1.0, 80.0);
    // find a face crossing the interface
    bool found = false;
    for (std::size_t c = 0; c + 1 < g.size() && !found; ++c) {
      if (op.plus_mask[c] != op.plus_mask[c + 1]) {
        CHECK(op.face_eps(c, c + 1) == doctest::Approx(2.0 * 80.0 / 81.0));
        found = true;
      }
    }
    CHECK(found);
  }

  SUBCASE("constant fields are in the kernel away from the boundary") {
    EllipticOperator op = assemble(ls, 1.0, 80.0);
    std::vector<double> ones(g.size(), 1.0), out;
    op.apply(ones, out);
    for (int k = 1; k < g.n[2] - 1; ++k)
      for (int j = 1; j < g.n[1] - 1; ++j)
        for (int i = 1; i < g.n[0] - 1; ++i)
          CHECK(std::abs(out[g.index(i, j, k)]) < 1e-12);
  }
}

TEST_CASE("operator symmetry") {
  GridSpec g = unit_box(13);
  LevelSet ls = levelset_sphere({0.5, 0.5, 0.5}, 0.15, g);
  EllipticOperator op = assemble(ls, 1.0, 80.0);
  ScalarField u = random_zero_trace(g, 1), v = random_zero_trace(g, 2);
  std::vector<double> au, av;
  op.apply(u.v, au);
  op.apply(v.v, av);
  double lhs = det_dot(au, v.v), rhs = det_dot(u.v, av);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("cg solves and reports") {
  GridSpec g = unit_box(17);
  LevelSet ls = levelset_sphere({0.5, 0.5, 0.5}, 0.2, g);
  EllipticOperator op = assemble(ls, 1.0, 80.0);

  SUBCASE("zero rhs gives the zero solution") {
    CgResult r = cg_solve(op, ScalarField(g, 0.0), 1e-12, 100);
    CHECK(r.iterations == 0);
    for (double v : r.x.v) CHECK(v == 0.0);
  }

  SUBCASE("recovers a known field") {
    ScalarField truth = random_zero_trace(g, 9);
    ScalarField rhs(g, 0.0);
    std::vector<double> b;
    op.apply(truth.v, b);
    rhs.v = b;
    CgResult r = cg_solve(op, rhs, 1e-12, 5000);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < truth.v.size(); ++i) {
      err = std::max(err, std::abs(truth.v[i] - r.x.v[i]));
      scale = std::max(scale, std::abs(truth.v[i]));
    }
    CHECK(err / scale < 1e-9);
  }

  SUBCASE("iteration cap raises a convergence failure") {
    ScalarField rhs(g, 1.0);
    CHECK_THROWS_AS(cg_solve(op, rhs, 1e-14, 3), SolverError);
  }

  SUBCASE("residual history decreases") {
    ScalarField rhs = random_zero_trace(g, 21);
    CgResult r = cg_solve(op, rhs, 1e-10, 5000);
    int upticks = 0;
    for (std::size_t i = 1; i < r.residual_history.size(); ++i)
      if (r.residual_history[i] > r.residual_history[i - 1] * 1.0000001) ++upticks;
    CHECK(upticks == 0);
  }
}

TEST_CASE("manufactured solution converges at second order") {
  auto solve_error = [](int n) {
    GridSpec g = unit_box(n);
    LevelSet ls = all_minus(g);
    EllipticOperator op = assemble(ls, 1.0, 1.0);
    ScalarField rhs(g, 0.0);
    auto exact = [](const Vec3& x) {
      return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::sin(M_PI * x[2]);
    };
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          rhs.at(i, j, k) = 3.0 * M_PI * M_PI * exact(g.pos(i, j, k));
    CgResult r = cg_solve(op, rhs, 1e-12, 20000);
    double l2 = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double d = r.x.at(i, j, k) - exact(g.pos(i, j, k));
          l2 += d * d;
        }
    return std::sqrt(l2 * g.h(0) * g.h(1) * g.h(2));
  };
  double e1 = solve_error(13), e2 = solve_error(25), e3 = solve_error(49);
  double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  CHECK(p1 == doctest::Approx(2.0).epsilon(0.06));
  CHECK(p2 == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("a nonnegative diagonal damps the solution (M-matrix bound)") {
  GridSpec g = unit_box(13);
  LevelSet ls = all_minus(g);
  ScalarField rhs(g, 0.0);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k < 12; ++k)
    for (int j = 1; j < 12; ++j)
      for (int i = 1; i < 12; ++i) rhs.at(i, j, k) = u(rng);

  EllipticOperator plain = assemble(ls, 1.0, 1.0);
  ScalarField d(g, 5.0);
  EllipticOperator damped = assemble(ls, 1.0, 1.0, d);
  double m0 = cg_solve(plain, rhs, 1e-12, 5000).x.max_abs();
  double m1 = cg_solve(damped, rhs, 1e-12, 5000).x.max_abs();
  CHECK(m1 <= m0 * (1.0 + 1e-12));
}
