#pragma once

#include "pbf/grid.hpp"

namespace pbf {

/// Signed-distance representation of the dielectric boundary on a grid.
/// Negative values are the solute side, positive the solvent side; nodes with
/// phi == 0 are classified as solute (closed solute convention).
struct LevelSet {
  ScalarField phi;

  const GridSpec& grid() const { return phi.grid; }
  /// True when the node belongs to the solvent region (phi > 0 strictly).
  bool is_plus(int i, int j, int k) const { return phi.at(i, j, k) > 0.0; }
  bool is_plus(std::size_t idx) const { return phi.v[idx] > 0.0; }
};

/// phi(x) = |x - center| - radius at every node.  The sphere must sit inside
/// the box with clearance >= 4h.
LevelSet levelset_sphere(const Vec3& center, double radius, const GridSpec& grid);

/// Nodewise min of the two fields, then re-distanced in the interface tube.
LevelSet levelset_union(const LevelSet& a, const LevelSet& b);

/// Recomputes |phi| in the band |phi| <= width as the exact distance to the
/// piecewise-linear zero surface; signs are preserved.  Values outside the
/// band are left untouched.
void redistance_tube(LevelSet& ls, double width);

/// max |grad phi| deviation from 1 over nodes with |phi| <= width (diagnostic
/// for the signed-distance tube invariant).
double tube_gradient_deviation(const LevelSet& ls, double width);

}  // namespace pbf
