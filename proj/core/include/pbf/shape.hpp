#pragma once

#include "pbf/energy.hpp"
#include "pbf/force.hpp"

namespace pbf {

/// New level set whose zero set is the flow image of the old one: node values
/// phi(T_{-t}(x)) (backward composition), then re-distanced in the tube.
/// Throws GeometryError when the transported interface leaves the velocity
/// support tube.
LevelSet transported_levelset(const LevelSet& ls, const VelocityField& v, double t);

/// Central-difference probe of the energy along a boundary flow, against the
/// surface-integral formula value on the base interface.
struct VariationExperiment {
  std::vector<double> ts;       // positive offsets; each contributes a +/- pair
  std::vector<double> e_plus;   // E[Gamma_{+t}]
  std::vector<double> e_minus;  // E[Gamma_{-t}]
  std::vector<double> fd;       // (E_+ - E_-)/(2t) per pair
  double fd_extrapolated = 0.0;
  double formula_value = 0.0;   // sum q (V.n) dS on the base interface
  double discrepancy = 0.0;     // |fd_extrapolated - formula| / |fd_extrapolated|
  double base_energy = 0.0;
};

/// Runs the full experiment: every E[Gamma_t] re-solves all boundary-
/// dependent fields.  PB non-convergence at any t aborts, naming the t.
VariationExperiment fd_shape_derivative(const SolvationSystem& sys, const LevelSet& ls,
                                        const VelocityField& v, const std::vector<double>& ts,
                                        const SolveParams& params = {});

}  // namespace pbf
