#include "pbf/charges.hpp"

#include <cmath>

namespace pbf {

namespace {
constexpr double kFourPi = 4.0 * M_PI;
constexpr double kSingular = 1e-12;
}  // namespace

void PointChargeSet::validate_clearance(const LevelSet& ls) const {
  if (charges.empty()) throw ConfigError("charge set: at least one charge required");
  const double clearance = 2.0 * ls.grid().hmax();
  for (const auto& c : charges) {
    if (!ls.grid().contains(c.position))
      throw GeometryError("charge set: charge outside the computational box");
    double phi = ls.phi.interp(c.position);
    if (phi > -clearance)
      throw GeometryError("charge set: charge too close to the dielectric boundary (needs 2h)");
  }
}

double coulomb_potential(const PointChargeSet& c, double eps_minus, const Vec3& x) {
  double acc = 0.0;
  for (const auto& q : c.charges) {
    double r = norm(x - q.position);
    if (r < kSingular) throw GeometryError("coulomb_potential: evaluation at a charge location");
    acc += q.magnitude / (kFourPi * eps_minus * r);
  }
  return acc;
}

Vec3 coulomb_gradient(const PointChargeSet& c, double eps_minus, const Vec3& x) {
  Vec3 acc{0, 0, 0};
  for (const auto& q : c.charges) {
    Vec3 d = x - q.position;
    double r = norm(d);
    if (r < kSingular) throw GeometryError("coulomb_gradient: evaluation at a charge location");
    acc = acc + (-q.magnitude / (kFourPi * eps_minus * r * r * r)) * d;
  }
  return acc;
}

ScalarField coulomb_field(const PointChargeSet& c, double eps_minus, const GridSpec& g) {
  ScalarField f(g, 0.0, "coulomb");
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i)
        f.at(i, j, (int)k) = coulomb_potential(c, eps_minus, g.pos(i, j, (int)k));
  return f;
}

}  // namespace pbf
