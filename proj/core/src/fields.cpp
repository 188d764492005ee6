#include "pbf/fields.hpp"

#include <cmath>

namespace pbf {

BoundaryTrace zero_trace() { return {}; }

BoundaryTrace constant_trace(double value) {
  BoundaryTrace t;
  t.fn = [value](const Vec3&) { return value; };
  return t;
}

BoundaryTrace linear_trace(int axis, double slope, const GridSpec& g) {
  double center = 0.5 * (g.lo[axis] + g.hi[axis]);
  BoundaryTrace t;
  t.fn = [axis, slope, center](const Vec3& x) { return slope * (x[axis] - center); };
  return t;
}

void validate_system(const SolvationSystem& sys) {
  if (!(sys.eps_minus > 0.0) || !(sys.eps_plus > 0.0))
    throw ConfigError("system: dielectric coefficients must be positive");
  if (sys.eps_minus == sys.eps_plus)
    throw ConfigError("system: solute and solvent dielectric coefficients must differ");
  if (sys.charges.charges.empty()) throw ConfigError("system: at least one charge required");
}

namespace {

EllipticOperator uniform_operator(const GridSpec& g) {
  EllipticOperator op;
  op.grid = g;
  op.eps_minus = 1.0;
  op.eps_plus = 1.0;
  op.plus_mask.assign(g.size(), 0);
  return op;
}

ScalarField boundary_values(const GridSpec& g, const BoundaryTrace& trace,
                            const ScalarField* coulomb, const PointChargeSet* charges,
                            double eps_minus) {
  ScalarField b(g, 0.0, "dirichlet");
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        if (!g.on_boundary(i, j, k)) continue;
        Vec3 x = g.pos(i, j, k);
        double val = trace(x);
        if (charges) {
          val -= coulomb ? coulomb->at(i, j, k) : coulomb_potential(*charges, eps_minus, x);
        }
        b.at(i, j, k) = val;
      }
  return b;
}

}  // namespace

ScalarField solve_hat_phi(const PointChargeSet& charges, double eps_minus,
                          const BoundaryTrace& trace, const GridSpec& grid,
                          const SolveParams& params, const ScalarField* coulomb_nodes) {
  EllipticOperator op = uniform_operator(grid);
  ScalarField rhs(grid, 0.0);
  ScalarField bc = boundary_values(grid, trace, coulomb_nodes, &charges, eps_minus);
  CgResult r = solve_dirichlet(op, rhs, bc, params.cg_tol, params.cg_max_iter);
  r.x.tag = "hat_phi_regular";
  return r.x;
}

ScalarField solve_phi_gamma_infty(const SolvationSystem& sys, const LevelSet& ls,
                                  const SolveParams& params) {
  if (sys.boundary.is_zero()) return ScalarField(ls.grid(), 0.0, "phi_gamma_infty");
  EllipticOperator op = assemble(ls, sys.eps_minus, sys.eps_plus);
  ScalarField rhs(ls.grid(), 0.0);
  ScalarField bc = boundary_values(ls.grid(), sys.boundary, nullptr, nullptr, sys.eps_minus);
  CgResult r = solve_dirichlet(op, rhs, bc, params.cg_tol, params.cg_max_iter);
  r.x.tag = "phi_gamma_infty";
  return r.x;
}

ScalarField solve_hat_phi_gamma_infty(const SolvationSystem& sys, const LevelSet& ls,
                                      const SolveParams& params,
                                      const ScalarField* coulomb_nodes) {
  const GridSpec& g = ls.grid();
  EllipticOperator op = assemble(ls, sys.eps_minus, sys.eps_plus);

  // RHS: the weak pairing -(eps_plus - eps_minus) int_{Omega_+} grad phi_C .
  // grad eta assembled as face fluxes.  A face belongs to the solvent region
  // when the midpoint level-set value is positive.
  ScalarField rhs(g, 0.0);
  const double de = sys.eps_plus - sys.eps_minus;
  if (de != 0.0) {
    const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          std::size_t c = g.index(i, j, k);
          const int dn[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
          for (int a = 0; a < 3; ++a) {
            int ii = i + dn[a][0], jj = j + dn[a][1], kk = k + dn[a][2];
            if (ii >= nx || jj >= ny || kk >= nz) continue;
            std::size_t nb = g.index(ii, jj, kk);
            double phi_mid = 0.5 * (ls.phi.v[c] + ls.phi.v[nb]);
            if (!(phi_mid > 0.0)) continue;
            Vec3 mid = 0.5 * (g.pos(i, j, k) + g.pos(ii, jj, kk));
            double gc = coulomb_gradient(sys.charges, sys.eps_minus, mid)[a];
            // contribution of face (c, nb) to the divergence at both ends
            rhs.v[c] += de * gc / g.h(a);
            rhs.v[nb] -= de * gc / g.h(a);
          }
        }
  }

  ScalarField bc = boundary_values(g, sys.boundary, coulomb_nodes, &sys.charges, sys.eps_minus);
  CgResult r = solve_dirichlet(op, rhs, bc, params.cg_tol, params.cg_max_iter);
  r.x.tag = "hat_phi_gamma_infty_regular";
  return r.x;
}

}  // namespace pbf
