#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbf {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};
struct GeometryError : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct SaturationError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

Mat3 mat_identity();
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Vec3 mat_vec(const Mat3& a, const Vec3& v);
Mat3 mat_transpose(const Mat3& a);
double mat_det(const Mat3& a);
Mat3 mat_inverse(const Mat3& a);
Mat3 mat_scale(double s, const Mat3& a);
Mat3 mat_add(const Mat3& a, const Mat3& b);

/// Axis-aligned node-centered Cartesian box.  Nodes per axis include both
/// box faces, so the spacing is (hi - lo) / (n - 1).
struct GridSpec {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};
  std::array<int, 3> n{8, 8, 8};

  GridSpec() = default;
  GridSpec(const Vec3& lower, const Vec3& upper, std::array<int, 3> nodes);

  double h(int axis) const { return (hi[axis] - lo[axis]) / (n[axis] - 1); }
  double hmax() const { return std::max(h(0), std::max(h(1), h(2))); }
  double hmin() const { return std::min(h(0), std::min(h(1), h(2))); }
  std::size_t size() const {
    return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]);
  }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * n[1] + j) * n[0] + i;
  }
  Vec3 pos(int i, int j, int k) const {
    return {lo[0] + i * h(0), lo[1] + j * h(1), lo[2] + k * h(2)};
  }
  bool on_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == n[0] - 1 || j == n[1] - 1 || k == n[2] - 1;
  }
  bool contains(const Vec3& x) const {
    return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1] && x[2] >= lo[2] &&
           x[2] <= hi[2];
  }
  bool operator==(const GridSpec& o) const { return lo == o.lo && hi == o.hi && n == o.n; }
};

/// Node-sampled scalar field.  `tag` records which quantity the samples
/// realize (diagnostic only, never used for dispatch).
struct ScalarField {
  GridSpec grid;
  std::vector<double> v;
  std::string tag;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0, std::string t = {})
      : grid(g), v(g.size(), fill), tag(std::move(t)) {}

  double& at(int i, int j, int k) { return v[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return v[grid.index(i, j, k)]; }

  /// Trilinear interpolation; clamps to the box.
  double interp(const Vec3& x) const;
  /// Trilinear interpolation of node-wise centered-difference gradients
  /// (one-sided on the box faces).
  Vec3 interp_gradient(const Vec3& x) const;
  /// Gradient of the trilinear interpolant itself, evaluated inside the
  /// containing cell.  Exact for the interpolant, one order less accurate
  /// than interp_gradient at generic points.
  Vec3 interpolant_gradient(const Vec3& x) const;

  /// Centered-difference gradient at a node (one-sided on the box faces).
  Vec3 node_gradient(int i, int j, int k) const;

  /// C^1 quadratic B-spline view of the samples (27-node stencil, smoothing:
  /// reproduces the samples to O(h^2)).  Used where a Lipschitz gradient
  /// field is required.
  double spline(const Vec3& x) const;
  Vec3 spline_gradient(const Vec3& x) const;

  double max_abs() const;
};

struct VectorField3 {
  GridSpec grid;
  std::vector<double> x, y, z;
  explicit VectorField3(const GridSpec& g) : grid(g), x(g.size()), y(g.size()), z(g.size()) {}
  Vec3 at(std::size_t idx) const { return {x[idx], y[idx], z[idx]}; }
};

/// Deterministic chunked sum: identical result for any thread count.
double det_sum(const std::vector<double>& a);
double det_dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pbf
