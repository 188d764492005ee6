#pragma once

#include "pbf/level_set.hpp"

namespace pbf {

struct PointCharge {
  Vec3 position;
  double magnitude;
};

/// Solute point charges.  All positions must lie strictly in the solute
/// region with clearance >= 2h from the interface (checked by
/// validate_clearance, called by the solver entry points).
struct PointChargeSet {
  std::vector<PointCharge> charges;

  std::size_t size() const { return charges.size(); }
  void validate_clearance(const LevelSet& ls) const;
};

/// Coulomb potential in the uniform solute dielectric:
/// sum_i Q_i / (4 pi eps_minus |x - x_i|).
double coulomb_potential(const PointChargeSet& c, double eps_minus, const Vec3& x);

/// Gradient of the Coulomb potential (the field is -gradient).
Vec3 coulomb_gradient(const PointChargeSet& c, double eps_minus, const Vec3& x);

/// Node-sampled Coulomb potential over a grid.
ScalarField coulomb_field(const PointChargeSet& c, double eps_minus, const GridSpec& g);

}  // namespace pbf
