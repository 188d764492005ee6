#include "pbf/runner.hpp"

#include <filesystem>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbf {

namespace fs = std::filesystem;

void apply_thread_setting(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

namespace {

struct Prepared {
  LevelSet ls;
  SolvationSystem sys;
};

Prepared prepare(const RunConfig& c, std::ostream& log) {
  apply_thread_setting(c.threads);
  Prepared p{make_levelset(c), make_system(c)};
  log << "grid " << c.nodes << "^3, h=" << g17(p.ls.grid().hmax()) << ", spheres="
      << c.spheres.size() << ", charges=" << p.sys.charges.size() << "\n";
  return p;
}

fs::path ensure_out_dir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

const char* force_formula_id(const SolvationSystem& sys) {
  return sys.boundary.is_zero() ? "deltaJ" : "mainG1";
}

}  // namespace

int cmd_solve(const RunConfig& c, std::ostream& log) {
  Prepared p = prepare(c, log);
  fs::path dir = ensure_out_dir(c);
  PBSolution sol = solve_pb(p.sys, p.ls, c.params);
  log << sol.newton.log;
  log << "newton converged in " << sol.newton.iterations
      << " iterations, residual=" << g17(sol.newton.final_residual) << "\n";

  ScalarField psi = sol.psi();
  psi.tag = "psi";
  write_grid_binary((dir / "psi.grid").string(), psi);
  write_vtk_scalar((dir / "psi.vtk").string(), psi, "psi");
  write_grid_binary((dir / "levelset.grid").string(), p.ls.phi);
  std::ofstream nl(dir / "newton.log");
  nl << sol.newton.log;
  return sol.newton.converged ? 0 : 1;
}

int cmd_energy(const RunConfig& c, std::ostream& log) {
  Prepared p = prepare(c, log);
  fs::path dir = ensure_out_dir(c);
  PBSolution sol = solve_pb(p.sys, p.ls, c.params);
  EnergyBreakdown e = energy_reformulated(sol);
  double alt = energy_via_concentrations(sol);
  double denom = std::max(std::abs(e.total), 1e-300);
  double discrepancy = std::abs(e.total - alt) / denom;

  std::ofstream csv(dir / "energy.csv");
  csv << "# formulas: newEGamma (breakdown), Fpsi (dual value)\n"
      << "gradient_term,boltzmann_term,mixed_term,charge_term,total,dual_total,"
         "dual_discrepancy\n"
      << g17(e.gradient_term) << ',' << g17(e.boltzmann_term) << ',' << g17(e.mixed_term) << ','
      << g17(e.charge_term) << ',' << g17(e.total) << ',' << g17(alt) << ',' << g17(discrepancy)
      << '\n';

  log << "energy breakdown\n"
      << "  gradient   " << g17(e.gradient_term) << "\n"
      << "  boltzmann  " << g17(e.boltzmann_term) << "\n"
      << "  mixed      " << g17(e.mixed_term) << "\n"
      << "  charge     " << g17(e.charge_term) << "\n"
      << "  total      " << g17(e.total) << "\n"
      << "  dual total " << g17(alt) << "  (discrepancy " << g17(discrepancy) << ")\n";
  return 0;
}

int cmd_force(const RunConfig& c, std::ostream& log) {
  Prepared p = prepare(c, log);
  fs::path dir = ensure_out_dir(c);
  PBSolution sol = solve_pb(p.sys, p.ls, c.params);
  InterfaceMesh mesh = extract_interface(p.ls);
  SurfaceTraces traces = extract_traces(sol, mesh);
  ForceDecomposition d = force_decomposition(traces, p.sys.ions, p.sys.eps_minus, p.sys.eps_plus);

  std::ofstream csv(dir / "force.csv");
  csv << "# formula: " << force_formula_id(p.sys) << "\n"
      << "x,y,z,nx,ny,nz,area,q,normal_term,tangential_term,boltzmann_term\n";
  for (std::size_t i = 0; i < traces.rows.size(); ++i) {
    const TraceRow& r = traces.rows[i];
    csv << g17(r.point[0]) << ',' << g17(r.point[1]) << ',' << g17(r.point[2]) << ','
        << g17(r.normal[0]) << ',' << g17(r.normal[1]) << ',' << g17(r.normal[2]) << ','
        << g17(r.area) << ',' << g17(d.total[i]) << ',' << g17(d.normal_term[i]) << ','
        << g17(d.tangential_term[i]) << ',' << g17(d.boltzmann_term[i]) << '\n';
  }
  write_vtk_interface((dir / "force.vtk").string(), traces,
                      {{"q", &d.total},
                       {"normal_term", &d.normal_term},
                       {"tangential_term", &d.tangential_term},
                       {"boltzmann_term", &d.boltzmann_term}});

  double area = 0.0, mean_q = 0.0;
  for (std::size_t i = 0; i < traces.rows.size(); ++i) {
    area += traces.rows[i].area;
    mean_q += d.total[i] * traces.rows[i].area;
  }
  mean_q /= area;
  log << "interface samples " << traces.rows.size() << ", area " << g17(area) << ", mean q "
      << g17(mean_q) << "\n";
  return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& log) {
  Prepared p = prepare(c, log);
  fs::path dir = ensure_out_dir(c);
  VelocityField v = make_velocity(c, p.ls);
  VariationExperiment exp = fd_shape_derivative(p.sys, p.ls, v, c.t_values, c.params);

  std::ofstream csv(dir / "validate.csv");
  csv << "# formula: " << force_formula_id(p.sys) << " vs central-difference\n"
      << "t,e_plus,e_minus,fd,formula,discrepancy\n";
  for (std::size_t i = 0; i < exp.ts.size(); ++i) {
    csv << g17(exp.ts[i]) << ',' << g17(exp.e_plus[i]) << ',' << g17(exp.e_minus[i]) << ','
        << g17(exp.fd[i]) << ',' << g17(exp.formula_value) << ','
        << g17(std::abs(exp.fd[i] - exp.formula_value) /
               std::max(std::abs(exp.fd[i]), 1e-300))
        << '\n';
  }
  csv << "# extrapolated\n"
      << g17(0.0) << ',' << g17(exp.base_energy) << ',' << g17(exp.base_energy) << ','
      << g17(exp.fd_extrapolated) << ',' << g17(exp.formula_value) << ','
      << g17(exp.discrepancy) << '\n';

  log << "base energy " << g17(exp.base_energy) << "\n";
  for (std::size_t i = 0; i < exp.ts.size(); ++i)
    log << "t=" << g17(exp.ts[i]) << "  fd=" << g17(exp.fd[i]) << "\n";
  log << "fd (extrapolated)  " << g17(exp.fd_extrapolated) << "\n"
      << "formula            " << g17(exp.formula_value) << "\n"
      << "discrepancy        " << g17(exp.discrepancy) << "  (tolerance "
      << g17(c.fd_tolerance) << ")\n";
  return exp.discrepancy <= c.fd_tolerance ? 0 : 1;
}

}  // namespace pbf
