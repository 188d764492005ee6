#include "pbf/level_set.hpp"

#include <algorithm>
#include <cmath>

#include "pbf/interface_mesh.hpp"

namespace pbf {

LevelSet levelset_sphere(const Vec3& center, double radius, const GridSpec& grid) {
  if (radius < 0) throw GeometryError("levelset_sphere: negative radius");
  const double clearance = 4.0 * grid.hmax();
  for (int a = 0; a < 3; ++a) {
    if (center[a] - radius < grid.lo[a] + clearance || center[a] + radius > grid.hi[a] - clearance)
      throw GeometryError("levelset_sphere: sphere too close to the box boundary (needs 4h clearance)");
  }
  LevelSet ls;
  ls.phi = ScalarField(grid, 0.0, "phi");
  for (int k = 0; k < grid.n[2]; ++k)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int i = 0; i < grid.n[0]; ++i) {
        Vec3 x = grid.pos(i, j, k);
        ls.phi.at(i, j, k) = norm(x - center) - radius;
      }
  return ls;
}

LevelSet levelset_union(const LevelSet& a, const LevelSet& b) {
  if (!(a.grid() == b.grid())) throw GeometryError("levelset_union: grid mismatch");
  LevelSet out;
  out.phi = ScalarField(a.grid(), 0.0, "phi");
  bool is_a = true, is_b = true;
  for (std::size_t idx = 0; idx < out.phi.v.size(); ++idx) {
    out.phi.v[idx] = std::min(a.phi.v[idx], b.phi.v[idx]);
    is_a = is_a && out.phi.v[idx] == a.phi.v[idx];
    is_b = is_b && out.phi.v[idx] == b.phi.v[idx];
  }
  // When one input dominates (nested or identical), the min is already that
  // signed distance; re-distancing would only perturb it.
  if (!is_a && !is_b) redistance_tube(out, 4.0 * a.grid().hmax());
  return out;
}

namespace {

// Closest-point distance from p to triangle abc (Ericson, Real-Time
// Collision Detection, 5.1.5).
double point_triangle_dist(const Vec3& p, const Triangle& t) {
  Vec3 ab = t.b - t.a, ac = t.c - t.a, ap = p - t.a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return norm(ap);
  Vec3 bp = p - t.b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return norm(bp);
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    return norm(ap - v * ab);
  }
  Vec3 cp = p - t.c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return norm(cp);
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    return norm(ap - w * ac);
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    Vec3 q = t.b + w * (t.c - t.b);
    return norm(p - q);
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  Vec3 q = t.a + v * ab + w * ac;
  return norm(p - q);
}

struct FacetBins {
  const GridSpec* grid = nullptr;
  std::array<int, 3> nc{};
  std::vector<std::vector<int>> bins;

  std::size_t cell_index(int i, int j, int k) const {
    return (std::size_t(k) * nc[1] + j) * nc[0] + i;
  }

  void build(const GridSpec& g, const std::vector<Triangle>& facets) {
    grid = &g;
    nc = {g.n[0] - 1, g.n[1] - 1, g.n[2] - 1};
    bins.assign(std::size_t(nc[0]) * nc[1] * nc[2], {});
    for (int f = 0; f < (int)facets.size(); ++f) {
      Vec3 c = (1.0 / 3.0) * (facets[f].a + facets[f].b + facets[f].c);
      int ci[3];
      for (int a = 0; a < 3; ++a) {
        int idx = int(std::floor((c[a] - g.lo[a]) / g.h(a)));
        ci[a] = std::clamp(idx, 0, nc[a] - 1);
      }
      bins[cell_index(ci[0], ci[1], ci[2])].push_back(f);
    }
  }
};

}  // namespace

void redistance_tube(LevelSet& ls, double width) {
  const GridSpec& g = ls.grid();
  std::vector<Triangle> facets = triangulate_zero_set(ls);
  if (facets.empty()) return;
  FacetBins bins;
  bins.build(g, facets);

  const double h = g.hmax();
  const int max_rad = int(std::ceil(3.0 * width / h)) + 2;

  std::vector<double> fresh = ls.phi.v;
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        double old = ls.phi.at(i, (int)j, (int)k);
        if (std::abs(old) > width) continue;
        Vec3 p = g.pos(i, j, (int)k);
        int ci = std::min(i, bins.nc[0] - 1);
        int cj = std::min(j, bins.nc[1] - 1);
        int ck = std::min((int)k, bins.nc[2] - 1);
        double best = std::numeric_limits<double>::infinity();
        // Expanding-shell search: stop once the found distance cannot be
        // beaten by facets in farther shells.
        for (int rad = 1; rad <= max_rad; ++rad) {
          int ilo = std::max(0, ci - rad), ihi = std::min(bins.nc[0] - 1, ci + rad);
          int jlo = std::max(0, cj - rad), jhi = std::min(bins.nc[1] - 1, cj + rad);
          int klo = std::max(0, ck - rad), khi = std::min(bins.nc[2] - 1, ck + rad);
          for (int kk = klo; kk <= khi; ++kk)
            for (int jj = jlo; jj <= jhi; ++jj)
              for (int ii = ilo; ii <= ihi; ++ii) {
                // only the newly added shell
                if (rad > 1 && std::abs(ii - ci) < rad && std::abs(jj - cj) < rad &&
                    std::abs(kk - ck) < rad)
                  continue;
                for (int f : bins.bins[bins.cell_index(ii, jj, kk)])
                  best = std::min(best, point_triangle_dist(p, facets[f]));
              }
          if (best <= (rad - 1) * g.hmin()) break;
        }
        if (std::isfinite(best)) {
          fresh[g.index(i, j, (int)k)] = (old <= 0.0) ? -best : best;
        }
      }
  ls.phi.v = std::move(fresh);
}

double tube_gradient_deviation(const LevelSet& ls, double width) {
  const GridSpec& g = ls.grid();
  double worst = 0.0;
  for (int k = 1; k < g.n[2] - 1; ++k)
    for (int j = 1; j < g.n[1] - 1; ++j)
      for (int i = 1; i < g.n[0] - 1; ++i) {
        if (std::abs(ls.phi.at(i, j, k)) > width) continue;
        double gn = norm(ls.phi.node_gradient(i, j, k));
        worst = std::max(worst, std::abs(gn - 1.0));
      }
  return worst;
}

}  // namespace pbf
