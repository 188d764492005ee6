#include "pbf/pb.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace pbf {

ScalarField PBSolution::psi_regular() const {
  ScalarField f(ls.grid(), 0.0, "psi_regular");
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = u.v[i] + hat_u.v[i];
  return f;
}

ScalarField PBSolution::psi() const {
  ScalarField f(ls.grid(), 0.0, "psi");
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = u.v[i] + hat_u.v[i] + coulomb.v[i];
  return f;
}

namespace {

struct PbWorkspace {
  const GridSpec* g;
  const EllipticOperator* op;
  const IonModel* ions;
  std::vector<double> shift;        // hat_u + coulomb - phi_gamma_inf/2 at nodes
  std::vector<std::uint8_t> plus;   // solvent mask
  double cell_vol;

  // residual F(u) = A u + chi_+ B'(u + shift); boundary rows zero
  void residual(const std::vector<double>& u, std::vector<double>& f) const {
    op->apply(u, f);
    if (ions->empty()) return;
    const int nx = g->n[0], ny = g->n[1], nz = g->n[2];
#pragma omp parallel for schedule(static)
    for (long long k = 1; k < nz - 1; ++k)
      for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) {
          std::size_t c = g->index(i, j, (int)k);
          if (plus[c]) f[c] += b_deriv(*ions, u[c] + shift[c]);
        }
  }

  double energy(const std::vector<double>& u) const {
    double quad = 0.5 * op->quadratic_form(u);
    if (ions->empty()) return quad;
    std::vector<double> bsum(g->n[2], 0.0);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < g->n[2]; ++k) {
      double s = 0.0;
      for (int j = 0; j < g->n[1]; ++j)
        for (int i = 0; i < g->n[0]; ++i) {
          std::size_t c = g->index(i, j, (int)k);
          if (plus[c]) s += b_value(*ions, u[c] + shift[c]);
        }
      bsum[k] = s;
    }
    double total = 0.0;
    for (double s : bsum) total += s;
    return quad + total * cell_vol;
  }
};

double vec_norm2(const std::vector<double>& v) { return std::sqrt(det_dot(v, v)); }

double vec_norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

PBSolution solve_pb(const SolvationSystem& sys, const LevelSet& ls, const SolveParams& params) {
  const GridSpec& g = ls.grid();
  sys.charges.validate_clearance(ls);

  // The interface must stay clear of the outer boundary.
  const double boundary_clearance = 2.0 * g.hmax();
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        if (!g.on_boundary(i, j, k)) continue;
        if (std::abs(ls.phi.at(i, j, k)) < boundary_clearance)
          throw GeometryError("solve_pb: dielectric boundary too close to the box boundary");
      }

  PBSolution sol;
  sol.sys = sys;
  sol.ls = ls;
  sol.coulomb = coulomb_field(sys.charges, sys.eps_minus, g);
  sol.h_zero = solve_hat_phi(sys.charges, sys.eps_minus, zero_trace(), g, params, &sol.coulomb);
  sol.h_inf = sys.boundary.is_zero()
                  ? sol.h_zero
                  : solve_hat_phi(sys.charges, sys.eps_minus, sys.boundary, g, params, &sol.coulomb);
  sol.phi_gamma_inf = solve_phi_gamma_infty(sys, ls, params);
  sol.hat_u = solve_hat_phi_gamma_infty(sys, ls, params, &sol.coulomb);

  EllipticOperator op0 = assemble(ls, sys.eps_minus, sys.eps_plus);

  PbWorkspace ws;
  ws.g = &g;
  ws.op = &op0;
  ws.ions = &sys.ions;
  ws.cell_vol = g.h(0) * g.h(1) * g.h(2);
  ws.plus = op0.plus_mask;
  ws.shift.resize(g.size());
  for (std::size_t c = 0; c < g.size(); ++c)
    ws.shift[c] = sol.hat_u.v[c] + sol.coulomb.v[c] - 0.5 * sol.phi_gamma_inf.v[c];

  std::vector<double> u(g.size(), 0.0), f(g.size(), 0.0);
  ws.residual(u, f);
  const double f0 = vec_norm2(f);
  double rel = (f0 == 0.0) ? 0.0 : 1.0;
  double energy = ws.energy(u);

  NewtonDiagnostics& diag = sol.newton;
  diag.residual_history.push_back(rel);
  diag.energy_history.push_back(energy);
  char line[256];
  std::snprintf(line, sizeof line, "newton iter=0 residual=%.6e rel=%.6e energy=%.12e step=-\n",
                f0, rel, energy);
  diag.log += line;

  while (rel > params.newton_tol) {
    if (diag.iterations >= params.max_newton)
      throw SolverError("solve_pb: Newton iteration cap exhausted");

    // Linearized operator with the chi_+ B'' diagonal.
    std::optional<ScalarField> d;
    if (!sys.ions.empty()) {
      ScalarField dd(g, 0.0, "newton_diag");
      for (std::size_t c = 0; c < g.size(); ++c)
        if (ws.plus[c]) dd.v[c] = b_deriv2(sys.ions, u[c] + ws.shift[c]);
      d = std::move(dd);
    }
    EllipticOperator jac = assemble(ls, sys.eps_minus, sys.eps_plus, d);

    ScalarField neg_f(g, 0.0);
    for (std::size_t c = 0; c < g.size(); ++c) neg_f.v[c] = -f[c];
    double inner_tol = std::clamp(1e-2 * rel, 1e-13, 1e-2);
    CgResult step = cg_solve(jac, neg_f, inner_tol, params.cg_max_iter);
    diag.cg_iterations.push_back(step.iterations);

    // Line search on the discrete energy; halve until it does not increase.
    double s = 1.0;
    std::vector<double> trial(g.size());
    double new_energy = 0.0;
    bool accepted = false;
    for (int half = 0; half <= 30; ++half) {
      for (std::size_t c = 0; c < g.size(); ++c) trial[c] = u[c] + s * step.x.v[c];
      new_energy = ws.energy(trial);
      if (new_energy <= energy + 4e-16 * std::abs(energy)) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) throw SolverError("solve_pb: line search failed after 30 halvings");

    double step_norm = s * vec_norm_inf(step.x.v);
    u.swap(trial);
    energy = new_energy;
    ws.residual(u, f);
    rel = (f0 == 0.0) ? 0.0 : vec_norm2(f) / f0;
    ++diag.iterations;
    diag.residual_history.push_back(rel);
    diag.energy_history.push_back(energy);
    std::snprintf(line, sizeof line,
                  "newton iter=%d residual=%.6e rel=%.6e energy=%.12e step=%.3g cg=%d\n",
                  diag.iterations, vec_norm_inf(f), rel, energy, s,
                  diag.cg_iterations.back());
    diag.log += line;

    if (rel > params.newton_tol && step_norm < 1e-14 * (1.0 + vec_norm_inf(u)))
      throw SolverError("solve_pb: Newton stagnation (step below floating-point floor)");
  }

  diag.converged = true;
  diag.final_relative_residual = rel;
  diag.final_residual = vec_norm_inf(f);
  sol.u = ScalarField(g, 0.0, "u");
  sol.u.v = std::move(u);
  return sol;
}

double pb_residual(const PBSolution& sol) {
  EllipticOperator op = assemble(sol.ls, sol.sys.eps_minus, sol.sys.eps_plus);
  PbWorkspace ws;
  ws.g = &sol.ls.grid();
  ws.op = &op;
  ws.ions = &sol.sys.ions;
  ws.cell_vol = ws.g->h(0) * ws.g->h(1) * ws.g->h(2);
  ws.plus = op.plus_mask;
  ws.shift.resize(ws.g->size());
  for (std::size_t c = 0; c < ws.g->size(); ++c)
    ws.shift[c] = sol.hat_u.v[c] + sol.coulomb.v[c] - 0.5 * sol.phi_gamma_inf.v[c];
  std::vector<double> f;
  ws.residual(sol.u.v, f);
  return vec_norm_inf(f);
}

double pb_energy_margin(const PBSolution& sol, const ScalarField& eta) {
  EllipticOperator op = assemble(sol.ls, sol.sys.eps_minus, sol.sys.eps_plus);
  PbWorkspace ws;
  ws.g = &sol.ls.grid();
  ws.op = &op;
  ws.ions = &sol.sys.ions;
  ws.cell_vol = ws.g->h(0) * ws.g->h(1) * ws.g->h(2);
  ws.plus = op.plus_mask;
  ws.shift.resize(ws.g->size());
  for (std::size_t c = 0; c < ws.g->size(); ++c)
    ws.shift[c] = sol.hat_u.v[c] + sol.coulomb.v[c] - 0.5 * sol.phi_gamma_inf.v[c];
  std::vector<double> pert(ws.g->size());
  for (std::size_t c = 0; c < ws.g->size(); ++c) pert[c] = sol.u.v[c] + eta.v[c];
  // G = -I up to a Gamma-dependent constant, so the margin flips sign.
  return -(ws.energy(pert) - ws.energy(sol.u.v));
}

MaximizationReport maximization_check(const PBSolution& sol, int n_perturbations, unsigned seed) {
  const GridSpec& g = sol.ls.grid();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);

  MaximizationReport rep;
  rep.trials = 0;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  const double steps[4] = {0.05, -0.05, 0.1, -0.1};

  for (int trial = 0; trial < n_perturbations; ++trial) {
    // Random zero-trace trigonometric field, sup-norm scaled to 1.
    double a[2][2][2];
    for (auto& p1 : a)
      for (auto& p2 : p1)
        for (double& c : p2) c = coeff(rng);
    ScalarField eta(g, 0.0, "eta");
    double sup = 0.0;
    for (int k = 0; k < g.n[2]; ++k)
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
          Vec3 x = g.pos(i, j, k);
          double xi[3];
          for (int ax = 0; ax < 3; ++ax) xi[ax] = (x[ax] - g.lo[ax]) / (g.hi[ax] - g.lo[ax]);
          double val = 0.0;
          for (int m1 = 1; m1 <= 2; ++m1)
            for (int m2 = 1; m2 <= 2; ++m2)
              for (int m3 = 1; m3 <= 2; ++m3)
                val += a[m1 - 1][m2 - 1][m3 - 1] * std::sin(m1 * M_PI * xi[0]) *
                       std::sin(m2 * M_PI * xi[1]) * std::sin(m3 * M_PI * xi[2]);
          eta.at(i, j, k) = val;
          sup = std::max(sup, std::abs(val));
        }
    if (sup == 0.0) continue;
    for (double& v : eta.v) v /= sup;

    for (double s : steps) {
      ScalarField scaled = eta;
      for (double& v : scaled.v) v *= s;
      double margin = pb_energy_margin(sol, scaled);
      rep.worst_margin = std::max(rep.worst_margin, margin);
      ++rep.trials;
    }
  }
  rep.passed = rep.worst_margin <= 1e-8 * std::max(1.0, std::abs(sol.newton.energy_history.back()));
  return rep;
}

}  // namespace pbf
