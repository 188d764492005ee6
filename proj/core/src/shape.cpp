#include "pbf/shape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pbf {

LevelSet transported_levelset(const LevelSet& ls, const VelocityField& v, double t) {
  const GridSpec& g = ls.grid();
  LevelSet out;
  out.phi = ls.phi;
  if (t == 0.0) return out;

  const double reach = v.support_radius + 4.0 * g.hmax();
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        double phi = ls.phi.at(i, j, (int)k);
        // Outside the support tube the flow is the identity.
        if (std::abs(phi) > reach) continue;
        Vec3 x = g.pos(i, j, (int)k);
        Vec3 back = flow_map(v, x, -t);
        out.phi.at(i, j, (int)k) = ls.phi.interp(back);
      }

  // Tube violation: any node that changed classification must have started
  // well inside the velocity support.
  for (std::size_t c = 0; c < g.size(); ++c) {
    bool before = ls.phi.v[c] > 0.0, after = out.phi.v[c] > 0.0;
    if (before != after && std::abs(ls.phi.v[c]) > v.support_radius)
      throw GeometryError("transported_levelset: interface left the velocity support tube");
  }

  redistance_tube(out, 4.0 * g.hmax());
  return out;
}

VariationExperiment fd_shape_derivative(const SolvationSystem& sys, const LevelSet& ls,
                                        const VelocityField& v, const std::vector<double>& ts,
                                        const SolveParams& params) {
  if (ts.size() < 1) throw ConfigError("fd_shape_derivative: at least one t required");

  VariationExperiment exp;
  exp.ts = ts;
  std::sort(exp.ts.begin(), exp.ts.end(), std::greater<double>());

  PBSolution base = solve_pb(sys, ls, params);
  exp.base_energy = energy_reformulated(base).total;
  InterfaceMesh mesh = extract_interface(ls);
  SurfaceTraces traces = extract_traces(base, mesh);
  std::vector<double> q = force_density(traces, sys.ions, sys.eps_minus, sys.eps_plus);
  exp.formula_value = integrate_variation(q, traces, v);

  auto energy_at = [&](double t) {
    try {
      LevelSet moved = transported_levelset(ls, v, t);
      PBSolution sol = solve_pb(sys, moved, params);
      return energy_reformulated(sol).total;
    } catch (const SolverError& e) {
      char msg[192];
      std::snprintf(msg, sizeof msg, "fd_shape_derivative: solve failed at t=%.6g (%s)", t,
                    e.what());
      throw SolverError(msg);
    }
  };

  for (double t : exp.ts) {
    double ep = energy_at(+t);
    double em = energy_at(-t);
    exp.e_plus.push_back(ep);
    exp.e_minus.push_back(em);
    exp.fd.push_back((ep - em) / (2.0 * t));
  }

  // Richardson step when the two smallest offsets are a factor-2 pair.
  std::size_t n = exp.ts.size();
  if (n >= 2 && std::abs(exp.ts[n - 2] / exp.ts[n - 1] - 2.0) < 1e-9) {
    exp.fd_extrapolated = (4.0 * exp.fd[n - 1] - exp.fd[n - 2]) / 3.0;
  } else {
    exp.fd_extrapolated = exp.fd[n - 1];
  }
  double denom = std::abs(exp.fd_extrapolated);
  exp.discrepancy = denom > 0 ? std::abs(exp.fd_extrapolated - exp.formula_value) / denom
                              : std::abs(exp.formula_value);
  return exp;
}

}  // namespace pbf
