#pragma once

#include "pbf/pb.hpp"

namespace pbf {

/// Reformulated electrostatic free energy split into its four parts.  All
/// charge-site evaluations touch regular fields only.
struct EnergyBreakdown {
  double gradient_term = 0.0;   // -(1/2) int eps |grad(psi - hat_phi_gi)|^2
  double boltzmann_term = 0.0;  // -int_solvent B(psi - phi_gi/2)
  double mixed_term = 0.0;      // (eps_- - eps_+)/2 int_solvent grad hat_phi_gi . grad hat_phi_0
  double charge_term = 0.0;     // (1/2) sum Q_i (hat_phi_inf - phi_C)(x_i)
  double total = 0.0;
};

/// Volume-integral route to the free energy (face-difference gradient
/// quadrature, nodewise Boltzmann sums, trilinear charge-site evaluation).
EnergyBreakdown energy_reformulated(const PBSolution& sol);

/// Independent route through the equilibrium concentrations:
/// (1/2) sum Q_i (psi - phi_C)(x_i)
///   + int_solvent [ (1/2)(psi - phi_gi) B'(arg) - B(arg) ].
double energy_via_concentrations(const PBSolution& sol);

}  // namespace pbf
