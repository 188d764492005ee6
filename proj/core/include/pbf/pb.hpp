#pragma once

#include "pbf/fields.hpp"

namespace pbf {

struct NewtonDiagnostics {
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;           // max-norm of the weak-form defect
  double final_relative_residual = 0.0;  // 2-norm, relative to the initial defect
  std::vector<double> residual_history;  // relative 2-norm per accepted iterate
  std::vector<double> energy_history;    // discrete energy I[u] per accepted iterate
  std::vector<int> cg_iterations;
  std::string log;  // structured text log, one line per iteration
};

/// Solved dielectric-boundary PB state.  `u` is the zero-trace unknown
/// psi - hat_phi_gamma_infty; the remaining fields are the auxiliary solves
/// the energy and force evaluations need.
struct PBSolution {
  SolvationSystem sys;
  LevelSet ls;
  ScalarField u;              // zero trace
  ScalarField hat_u;          // regular part of hat_phi_gamma_infty
  ScalarField phi_gamma_inf;  // dielectric-boundary Dirichlet field
  ScalarField coulomb;        // phi_C at nodes
  ScalarField h_zero;         // regular part of hat_phi_0
  ScalarField h_inf;          // regular part of hat_phi_infty
  NewtonDiagnostics newton;

  /// psi - phi_C at nodes (regular, finite at charges).
  ScalarField psi_regular() const;
  /// Full potential at nodes (contains the Coulomb part).
  ScalarField psi() const;
  /// Boltzmann argument psi - phi_gamma_inf/2 at a node index.
  double boltzmann_arg(std::size_t idx) const {
    return u.v[idx] + hat_u.v[idx] + coulomb.v[idx] - 0.5 * phi_gamma_inf.v[idx];
  }
};

/// Damped Newton on the shifted unknown.  Line search halves the step until
/// the discrete energy functional does not increase.  Throws SolverError on
/// stagnation or line-search failure.
PBSolution solve_pb(const SolvationSystem& sys, const LevelSet& ls, const SolveParams& params = {});

/// Max-norm of the discrete weak-form defect of a solved state.
double pb_residual(const PBSolution& sol);

struct MaximizationReport {
  int trials = 0;
  double worst_margin = 0.0;  // max over trials of G[psi + s eta] - G[psi]
  bool passed = false;
};

/// Perturbs the solved potential by random smooth zero-trace fields and
/// checks that the discrete PB energy functional never increases.
MaximizationReport maximization_check(const PBSolution& sol, int n_perturbations,
                                      unsigned seed = 20240701u);

/// Discrete PB energy functional difference G[psi + eta] - G[psi_Gamma] for a
/// zero-trace perturbation eta (the constant part of G cancels).
double pb_energy_margin(const PBSolution& sol, const ScalarField& eta);

}  // namespace pbf
