#include "pbf/interface_mesh.hpp"

#include <algorithm>
#include <cmath>

namespace pbf {

double InterfaceMesh::total_area() const {
  double s = 0.0;
  for (const auto& q : samples) s += q.area;
  return s;
}

namespace {

// 6-tet decomposition of the unit cell around the main diagonal 0-7.
// Cube corners numbered by bit pattern (x = bit 0, y = bit 1, z = bit 2).
constexpr int kTets[6][4] = {
    {0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7},
};

Vec3 edge_zero(const Vec3& pa, double fa, const Vec3& pb, double fb) {
  double t = fa / (fa - fb);
  return pa + t * (pb - pa);
}

void march_tet(const Vec3 p[4], const double f[4], std::vector<Triangle>& out) {
  bool plus[4];
  int nplus = 0;
  for (int i = 0; i < 4; ++i) {
    plus[i] = f[i] > 0.0;
    nplus += plus[i];
  }
  if (nplus == 0 || nplus == 4) return;

  if (nplus == 1 || nplus == 3) {
    int lone = -1;
    bool lone_sign = (nplus == 1);
    for (int i = 0; i < 4; ++i)
      if (plus[i] == lone_sign) lone = i;
    Vec3 q[3];
    int m = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == lone) continue;
      q[m++] = edge_zero(p[lone], f[lone], p[i], f[i]);
    }
    out.push_back({q[0], q[1], q[2]});
    return;
  }

  // 2-2 split: quad through the four crossing edges.
  int a[2], b[2], na = 0, nb = 0;
  for (int i = 0; i < 4; ++i) {
    if (plus[i])
      a[na++] = i;
    else
      b[nb++] = i;
  }
  Vec3 q00 = edge_zero(p[a[0]], f[a[0]], p[b[0]], f[b[0]]);
  Vec3 q01 = edge_zero(p[a[0]], f[a[0]], p[b[1]], f[b[1]]);
  Vec3 q11 = edge_zero(p[a[1]], f[a[1]], p[b[1]], f[b[1]]);
  Vec3 q10 = edge_zero(p[a[1]], f[a[1]], p[b[0]], f[b[0]]);
  out.push_back({q00, q01, q11});
  out.push_back({q00, q11, q10});
}

}  // namespace

std::vector<Triangle> triangulate_zero_set(const LevelSet& ls) {
  const GridSpec& g = ls.grid();
  std::vector<Triangle> facets;
  const double area_floor = 1e-14 * g.hmax() * g.hmax();
  for (int k = 0; k + 1 < g.n[2]; ++k)
    for (int j = 0; j + 1 < g.n[1]; ++j)
      for (int i = 0; i + 1 < g.n[0]; ++i) {
        double f[8];
        Vec3 p[8];
        bool any_plus = false, any_minus = false;
        for (int c = 0; c < 8; ++c) {
          int ii = i + (c & 1), jj = j + ((c >> 1) & 1), kk = k + ((c >> 2) & 1);
          f[c] = ls.phi.at(ii, jj, kk);
          p[c] = g.pos(ii, jj, kk);
          (f[c] > 0.0 ? any_plus : any_minus) = true;
        }
        if (!any_plus || !any_minus) continue;
        std::vector<Triangle> local;
        for (const auto& tet : kTets) {
          Vec3 tp[4];
          double tf[4];
          for (int c = 0; c < 4; ++c) {
            tp[c] = p[tet[c]];
            tf[c] = f[tet[c]];
          }
          march_tet(tp, tf, local);
        }
        for (const auto& t : local) {
          double area = 0.5 * norm(cross(t.b - t.a, t.c - t.a));
          if (area > area_floor) facets.push_back(t);
        }
      }
  return facets;
}

InterfaceMesh extract_interface(const LevelSet& ls) {
  const GridSpec& g = ls.grid();
  InterfaceMesh mesh;
  mesh.facets = triangulate_zero_set(ls);
  if (mesh.facets.empty()) throw GeometryError("extract_interface: empty interface");

  // Mean curvature at nodes: H = div(grad phi / |grad phi|) / 2, centered.
  auto node_unit_normal = [&](int i, int j, int k) {
    Vec3 n = ls.phi.node_gradient(i, j, k);
    double len = std::max(norm(n), 0.1);
    return (1.0 / len) * n;
  };
  auto node_curvature = [&](int i, int j, int k) {
    double div = 0.0;
    int ii[3] = {i, j, k};
    for (int a = 0; a < 3; ++a) {
      int lo[3] = {i, j, k}, hi[3] = {i, j, k};
      lo[a] = std::max(0, ii[a] - 1);
      hi[a] = std::min(g.n[a] - 1, ii[a] + 1);
      double span = (hi[a] - lo[a]) * g.h(a);
      div += (node_unit_normal(hi[0], hi[1], hi[2])[a] - node_unit_normal(lo[0], lo[1], lo[2])[a]) /
             span;
    }
    return 0.5 * div;
  };

  mesh.samples.reserve(mesh.facets.size());
  for (const auto& t : mesh.facets) {
    SurfaceSample s;
    s.point = (1.0 / 3.0) * (t.a + t.b + t.c);
    s.area = 0.5 * norm(cross(t.b - t.a, t.c - t.a));
    Vec3 grad = ls.phi.interp_gradient(s.point);
    double glen = norm(grad);
    if (glen < 0.1) throw GeometryError("extract_interface: degenerate gradient at a sample");
    s.normal = (1.0 / glen) * grad;

    // Trilinear interpolation of the node curvature over the containing cell.
    int ci[3];
    double fr[3];
    for (int a = 0; a < 3; ++a) {
      double tt = (s.point[a] - g.lo[a]) / g.h(a);
      int idx = std::clamp(int(std::floor(tt)), 0, g.n[a] - 2);
      ci[a] = idx;
      fr[a] = std::clamp(tt - idx, 0.0, 1.0);
    }
    double hcurv = 0.0;
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          double w = (dx ? fr[0] : 1 - fr[0]) * (dy ? fr[1] : 1 - fr[1]) * (dz ? fr[2] : 1 - fr[2]);
          if (w == 0.0) continue;
          hcurv += w * node_curvature(ci[0] + dx, ci[1] + dy, ci[2] + dz);
        }
    s.curvature = hcurv;
    mesh.samples.push_back(s);
  }
  return mesh;
}

}  // namespace pbf
