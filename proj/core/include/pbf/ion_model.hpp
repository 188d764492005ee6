#pragma once

#include <vector>

#include "pbf/level_set.hpp"

namespace pbf {

struct IonicSpecies {
  double charge = 0.0;  // q_j, elementary-charge units (times any global scale)
  double bulk = 0.0;    // c_j^inf > 0
};

/// Ionic species list with inverse thermal energy.  Construction enforces
/// bulk charge neutrality: sum_j q_j c_j^inf = 0 (1e-12 relative), at least
/// two species with both signs present.
struct IonModel {
  std::vector<IonicSpecies> species;
  double beta = 1.0;

  IonModel() = default;
  IonModel(std::vector<IonicSpecies> sp, double beta_inv_kT = 1.0);

  bool empty() const { return species.empty(); }
};

/// 1:1 salt with equal bulk concentrations.
IonModel make_symmetric_salt(double bulk, double beta = 1.0);

/// B(s) = beta^{-1} sum_j c_j^inf (exp(-beta q_j s) - 1).
/// Zero ionic strength (empty model) gives identically 0.
double b_value(const IonModel& m, double s);
/// B'(s) = -sum_j q_j c_j^inf exp(-beta q_j s).
double b_deriv(const IonModel& m, double s);
/// B''(s) = sum_j beta q_j^2 c_j^inf exp(-beta q_j s) > 0.
double b_deriv2(const IonModel& m, double s);

/// Boltzmann equilibrium concentrations c_j = c_j^inf exp(-beta q_j (psi -
/// phi_dirichlet/2)) in the solvent region, identically zero on the solute
/// side.  Both fields must live on the level set's grid.
std::vector<ScalarField> equilibrium_concentrations(const IonModel& m, const ScalarField& psi,
                                                    const ScalarField& phi_dirichlet,
                                                    const LevelSet& ls);

}  // namespace pbf
