#pragma once

#include "pbf/elliptic.hpp"
#include "pbf/system.hpp"

namespace pbf {

/// Regular part h = phi_hat - phi_C of a singularity-split harmonic field:
/// laplace h = 0 in the box, h = trace - phi_C on the boundary.  The full
/// field is recovered as h + phi_C.  `coulomb_nodes` may pass a precomputed
/// Coulomb node field.
ScalarField solve_hat_phi(const PointChargeSet& charges, double eps_minus,
                          const BoundaryTrace& trace, const GridSpec& grid,
                          const SolveParams& params = {},
                          const ScalarField* coulomb_nodes = nullptr);

/// The salt-free Dirichlet field: div(eps_Gamma grad phi) = 0 with the given
/// boundary trace.  Identically zero for the homogeneous trace.
ScalarField solve_phi_gamma_infty(const SolvationSystem& sys, const LevelSet& ls,
                                  const SolveParams& params = {});

/// Regular part u = hat_phi_Gamma_infty - phi_C of the dielectric-boundary
/// Coulomb field: div(eps_Gamma grad u) = -(eps_plus - eps_minus)
/// div(chi_plus grad phi_C) with u = trace - phi_C on the boundary.  The
/// right-hand side is assembled from the analytic Coulomb gradient at cell
/// faces classified as solvent.
ScalarField solve_hat_phi_gamma_infty(const SolvationSystem& sys, const LevelSet& ls,
                                      const SolveParams& params = {},
                                      const ScalarField* coulomb_nodes = nullptr);

}  // namespace pbf
