#include "pbf/grid.hpp"

#include <algorithm>

namespace pbf {

GridSpec::GridSpec(const Vec3& lower, const Vec3& upper, std::array<int, 3> nodes)
    : lo(lower), hi(upper), n(nodes) {
  for (int a = 0; a < 3; ++a) {
    if (!(hi[a] > lo[a])) throw GeometryError("grid: upper must exceed lower on every axis");
    if (n[a] < 8) throw GeometryError("grid: at least 8 nodes per axis required");
  }
}

Mat3 mat_identity() {
  Mat3 m{};
  m[0][0] = m[1][1] = m[2][2] = 1.0;
  return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 mat_vec(const Mat3& a, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
  return r;
}

Mat3 mat_transpose(const Mat3& a) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

double mat_det(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 mat_inverse(const Mat3& a) {
  double d = mat_det(a);
  Mat3 r{};
  r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
  r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
  r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
  r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
  r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
  r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
  r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
  r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
  r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
  return r;
}

Mat3 mat_scale(double s, const Mat3& a) {
  Mat3 r = a;
  for (auto& row : r)
    for (auto& e : row) e *= s;
  return r;
}

Mat3 mat_add(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

namespace {

struct CellLocator {
  int i, j, k;       // lower cell corner
  double fx, fy, fz; // fractions in [0,1]
};

CellLocator locate(const GridSpec& g, const Vec3& x) {
  CellLocator c{};
  double f[3];
  int id[3];
  for (int a = 0; a < 3; ++a) {
    double t = (x[a] - g.lo[a]) / g.h(a);
    int i = int(std::floor(t));
    i = std::clamp(i, 0, g.n[a] - 2);
    id[a] = i;
    f[a] = std::clamp(t - i, 0.0, 1.0);
  }
  c.i = id[0];
  c.j = id[1];
  c.k = id[2];
  c.fx = f[0];
  c.fy = f[1];
  c.fz = f[2];
  return c;
}

}  // namespace

double ScalarField::interp(const Vec3& x) const {
  CellLocator c = locate(grid, x);
  double c00 = at(c.i, c.j, c.k) * (1 - c.fx) + at(c.i + 1, c.j, c.k) * c.fx;
  double c10 = at(c.i, c.j + 1, c.k) * (1 - c.fx) + at(c.i + 1, c.j + 1, c.k) * c.fx;
  double c01 = at(c.i, c.j, c.k + 1) * (1 - c.fx) + at(c.i + 1, c.j, c.k + 1) * c.fx;
  double c11 = at(c.i, c.j + 1, c.k + 1) * (1 - c.fx) + at(c.i + 1, c.j + 1, c.k + 1) * c.fx;
  double d0 = c00 * (1 - c.fy) + c10 * c.fy;
  double d1 = c01 * (1 - c.fy) + c11 * c.fy;
  return d0 * (1 - c.fz) + d1 * c.fz;
}

Vec3 ScalarField::node_gradient(int i, int j, int k) const {
  Vec3 g{};
  const auto& gr = grid;
  auto diff = [&](int axis, int ii, int jj, int kk) {
    int d[3] = {0, 0, 0};
    d[axis] = 1;
    int lo_idx[3] = {ii - d[0], jj - d[1], kk - d[2]};
    int hi_idx[3] = {ii + d[0], jj + d[1], kk + d[2]};
    int pos = (axis == 0) ? ii : (axis == 1 ? jj : kk);
    if (pos == 0) {
      return (at(hi_idx[0], hi_idx[1], hi_idx[2]) - at(ii, jj, kk)) / gr.h(axis);
    }
    if (pos == gr.n[axis] - 1) {
      return (at(ii, jj, kk) - at(lo_idx[0], lo_idx[1], lo_idx[2])) / gr.h(axis);
    }
    return (at(hi_idx[0], hi_idx[1], hi_idx[2]) - at(lo_idx[0], lo_idx[1], lo_idx[2])) /
           (2.0 * gr.h(axis));
  };
  g[0] = diff(0, i, j, k);
  g[1] = diff(1, i, j, k);
  g[2] = diff(2, i, j, k);
  return g;
}

Vec3 ScalarField::interp_gradient(const Vec3& x) const {
  CellLocator c = locate(grid, x);
  Vec3 g{0, 0, 0};
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        double w = (di ? c.fx : 1 - c.fx) * (dj ? c.fy : 1 - c.fy) * (dk ? c.fz : 1 - c.fz);
        if (w == 0.0) continue;
        Vec3 gn = node_gradient(c.i + di, c.j + dj, c.k + dk);
        g = g + w * gn;
      }
  return g;
}

Vec3 ScalarField::interpolant_gradient(const Vec3& x) const {
  CellLocator c = locate(grid, x);
  double v000 = at(c.i, c.j, c.k), v100 = at(c.i + 1, c.j, c.k);
  double v010 = at(c.i, c.j + 1, c.k), v110 = at(c.i + 1, c.j + 1, c.k);
  double v001 = at(c.i, c.j, c.k + 1), v101 = at(c.i + 1, c.j, c.k + 1);
  double v011 = at(c.i, c.j + 1, c.k + 1), v111 = at(c.i + 1, c.j + 1, c.k + 1);
  double fx = c.fx, fy = c.fy, fz = c.fz;
  Vec3 g{};
  g[0] = ((v100 - v000) * (1 - fy) + (v110 - v010) * fy) * (1 - fz) / grid.h(0) +
         ((v101 - v001) * (1 - fy) + (v111 - v011) * fy) * fz / grid.h(0);
  g[1] = ((v010 - v000) * (1 - fx) + (v110 - v100) * fx) * (1 - fz) / grid.h(1) +
         ((v011 - v001) * (1 - fx) + (v111 - v101) * fx) * fz / grid.h(1);
  g[2] = ((v001 - v000) * (1 - fx) + (v101 - v100) * fx) * (1 - fy) / grid.h(2) +
         ((v011 - v010) * (1 - fx) + (v111 - v110) * fx) * fy / grid.h(2);
  return g;
}

namespace {

// Uniform quadratic B-spline weights about the nearest node; u in [-0.5, 0.5].
inline void qspline_weights(double u, double w[3], double dw[3]) {
  w[0] = 0.5 * (0.5 - u) * (0.5 - u);
  w[1] = 0.75 - u * u;
  w[2] = 0.5 * (0.5 + u) * (0.5 + u);
  dw[0] = u - 0.5;
  dw[1] = -2.0 * u;
  dw[2] = u + 0.5;
}

struct SplineStencil {
  int base[3];       // nearest node per axis, clamped to [1, n-2]
  double w[3][3];    // value weights
  double dw[3][3];   // derivative weights (per unit u)
};

SplineStencil spline_stencil(const GridSpec& g, const Vec3& x) {
  SplineStencil s{};
  for (int a = 0; a < 3; ++a) {
    double t = (x[a] - g.lo[a]) / g.h(a);
    int m = int(std::floor(t + 0.5));
    m = std::clamp(m, 1, g.n[a] - 2);
    double u = std::clamp(t - m, -0.5, 0.5);
    qspline_weights(u, s.w[a], s.dw[a]);
    s.base[a] = m;
  }
  return s;
}

}  // namespace

double ScalarField::spline(const Vec3& x) const {
  SplineStencil s = spline_stencil(grid, x);
  double acc = 0.0;
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        acc += s.w[0][di + 1] * s.w[1][dj + 1] * s.w[2][dk + 1] *
               at(s.base[0] + di, s.base[1] + dj, s.base[2] + dk);
  return acc;
}

Vec3 ScalarField::spline_gradient(const Vec3& x) const {
  SplineStencil s = spline_stencil(grid, x);
  Vec3 acc{0, 0, 0};
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        double f = at(s.base[0] + di, s.base[1] + dj, s.base[2] + dk);
        acc[0] += s.dw[0][di + 1] * s.w[1][dj + 1] * s.w[2][dk + 1] * f;
        acc[1] += s.w[0][di + 1] * s.dw[1][dj + 1] * s.w[2][dk + 1] * f;
        acc[2] += s.w[0][di + 1] * s.w[1][dj + 1] * s.dw[2][dk + 1] * f;
      }
  for (int a = 0; a < 3; ++a) acc[a] /= grid.h(a);
  return acc;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

namespace {
constexpr std::size_t kChunk = 1024;
}

double det_sum(const std::vector<double>& a) {
  const std::size_t nchunks = (a.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < (long long)nchunks; ++c) {
    double s = 0.0;
    std::size_t b = std::size_t(c) * kChunk;
    std::size_t e = std::min(a.size(), b + kChunk);
    for (std::size_t i = b; i < e; ++i) s += a[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double det_dot(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t nchunks = (a.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < (long long)nchunks; ++c) {
    double s = 0.0;
    std::size_t begin = std::size_t(c) * kChunk;
    std::size_t end = std::min(a.size(), begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace pbf
