#pragma once

#include "pbf/level_set.hpp"

namespace pbf {

struct SurfaceSample {
  Vec3 point;
  Vec3 normal;    // unit, pointing solute -> solvent
  double area;    // facet area weight dS
  double curvature;  // mean curvature H = (k1 + k2)/2
};

struct Triangle {
  Vec3 a, b, c;
};

/// Quadrature points on the zero set of a level set: one sample per facet of
/// the piecewise-linear zero surface, at the facet centroid.
struct InterfaceMesh {
  std::vector<SurfaceSample> samples;
  std::vector<Triangle> facets;

  double total_area() const;
};

/// Facets of the zero surface by tetrahedral decomposition of each grid cell
/// (6 tets per cell, linear interpolation along edges).
std::vector<Triangle> triangulate_zero_set(const LevelSet& ls);

/// Builds the interface mesh: facet centroids as samples, normals from the
/// trilinearly interpolated centered-difference gradient, H from the
/// divergence of the normalized gradient field.
/// Throws GeometryError when the zero set is empty or touches the box
/// boundary, and when |grad phi| < 0.1 at a sample.
InterfaceMesh extract_interface(const LevelSet& ls);

}  // namespace pbf
