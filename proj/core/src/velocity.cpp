#include "pbf/velocity.hpp"

#include <algorithm>
#include <cmath>

namespace pbf {

namespace {

constexpr double kFdStep = 1e-5;

int step_count(double t) {
  return std::max(8, int(std::ceil(std::abs(t) / 0.01)));
}

// C^2 bump on (-1, 1).
double bump(double s) {
  double a = 1.0 - s * s;
  return a > 0.0 ? a * a * a : 0.0;
}
double bump_deriv(double s) {
  double a = 1.0 - s * s;
  return a > 0.0 ? -6.0 * s * a * a : 0.0;
}

}  // namespace

Mat3 VelocityField::grad(const Vec3& x) const {
  if (jacobian) return jacobian(x);
  Mat3 g{};
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += kFdStep;
    xm[j] -= kFdStep;
    Vec3 vp = value(xp), vm = value(xm);
    for (int i = 0; i < 3; ++i) g[i][j] = (vp[i] - vm[i]) / (2.0 * kFdStep);
  }
  return g;
}

double VelocityField::divergence(const Vec3& x) const {
  Mat3 g = grad(x);
  return g[0][0] + g[1][1] + g[2][2];
}

Vec3 flow_map(const VelocityField& v, const Vec3& x0, double t) {
  if (t == 0.0) return x0;
  const int n = step_count(t);
  const double dt = t / n;
  Vec3 x = x0;
  for (int s = 0; s < n; ++s) {
    Vec3 k1 = v(x);
    Vec3 k2 = v(x + (0.5 * dt) * k1);
    Vec3 k3 = v(x + (0.5 * dt) * k2);
    Vec3 k4 = v(x + dt * k3);
    x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

double jacobian_Jt(const VelocityField& v, const Vec3& x0, double t) {
  if (t == 0.0) return 1.0;
  const int n = step_count(t);
  const double dt = t / n;
  Vec3 x = x0;
  double jac = 1.0;
  for (int s = 0; s < n; ++s) {
    // RK4 on the coupled system (x, J).
    Vec3 k1x = v(x);
    double k1j = v.divergence(x) * jac;
    Vec3 x2 = x + (0.5 * dt) * k1x;
    Vec3 k2x = v(x2);
    double k2j = v.divergence(x2) * (jac + 0.5 * dt * k1j);
    Vec3 x3 = x + (0.5 * dt) * k2x;
    Vec3 k3x = v(x3);
    double k3j = v.divergence(x3) * (jac + 0.5 * dt * k2j);
    Vec3 x4 = x + dt * k3x;
    Vec3 k4x = v(x4);
    double k4j = v.divergence(x4) * (jac + dt * k3j);
    x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    jac += (dt / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
  }
  if (!(jac > 0.0)) throw GeometryError("jacobian_Jt: nonpositive volume factor");
  return jac;
}

Mat3 matrix_AVt(const VelocityField& v, const Vec3& x0, double t) {
  Mat3 grad_T = mat_identity();
  if (t != 0.0) {
    const int n = step_count(t);
    const double dt = t / n;
    Vec3 x = x0;
    for (int s = 0; s < n; ++s) {
      Vec3 k1x = v(x);
      Mat3 k1g = mat_mul(v.grad(x), grad_T);
      Vec3 x2 = x + (0.5 * dt) * k1x;
      Mat3 g2 = mat_add(grad_T, mat_scale(0.5 * dt, k1g));
      Vec3 k2x = v(x2);
      Mat3 k2g = mat_mul(v.grad(x2), g2);
      Vec3 x3 = x + (0.5 * dt) * k2x;
      Mat3 g3 = mat_add(grad_T, mat_scale(0.5 * dt, k2g));
      Vec3 k3x = v(x3);
      Mat3 k3g = mat_mul(v.grad(x3), g3);
      Vec3 x4 = x + dt * k3x;
      Mat3 g4 = mat_add(grad_T, mat_scale(dt, k3g));
      Vec3 k4x = v(x4);
      Mat3 k4g = mat_mul(v.grad(x4), g4);
      x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      grad_T = mat_add(grad_T,
                       mat_scale(dt / 6.0,
                                 mat_add(mat_add(k1g, mat_scale(2.0, k2g)),
                                         mat_add(mat_scale(2.0, k3g), k4g))));
    }
  }
  double jac = mat_det(grad_T);
  Mat3 inv = mat_inverse(grad_T);
  return mat_scale(jac, mat_mul(inv, mat_transpose(inv)));
}

Mat3 matrix_AVt_rate_at_zero(const VelocityField& v, const Vec3& x) {
  Mat3 g = v.grad(x);
  double div = g[0][0] + g[1][1] + g[2][2];
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = (i == j ? div : 0.0) - g[i][j] - g[j][i];
  return r;
}

Mat3 tangential_projector(const Vec3& n) {
  if (std::abs(norm(n) - 1.0) > 1e-10)
    throw GeometryError("tangential_projector: normal is not unit length");
  Mat3 p = mat_identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] -= n[i] * n[j];
  return p;
}

VelocityField make_tangential_field(const LevelSet& ls, double d0, NormalExtension ext,
                                    std::function<Vec3(const Vec3&)> w) {
  if (!w) {
    w = [](const Vec3& x) -> Vec3 {
      return {std::sin(1.3 * x[1] + 0.2) + 0.4, std::cos(0.7 * x[2] - 0.5),
              std::sin(0.9 * x[0] + 1.1) - 0.3};
    };
  }
  const ScalarField* phi = &ls.phi;
  VelocityField v;
  v.support_radius = d0;
  v.value = [phi, d0, ext, w](const Vec3& x) -> Vec3 {
    if (!phi->grid.contains(x)) return {0, 0, 0};
    bool use_spline = ext == NormalExtension::SplineGradient;
    double f = use_spline ? phi->spline(x) : phi->interp(x);
    double cut = bump(f / d0);
    if (cut == 0.0) return {0, 0, 0};
    Vec3 g = use_spline ? phi->spline_gradient(x) : phi->interp_gradient(x);
    double glen2 = dot(g, g);
    if (glen2 < 1e-8) return {0, 0, 0};
    Vec3 ww = w(x);
    Vec3 tang = ww - (dot(ww, g) / glen2) * g;
    return cut * tang;
  };
  return v;
}

VelocityField make_radial_bump(const Vec3& center, double r0, double width, double amplitude) {
  VelocityField v;
  v.support_radius = width;
  v.value = [=](const Vec3& x) -> Vec3 {
    Vec3 d = x - center;
    double r = norm(d);
    if (r < 1e-12) return {0, 0, 0};
    double s = (r - r0) / width;
    return (amplitude * bump(s) / r) * d;
  };
  v.jacobian = [=](const Vec3& x) -> Mat3 {
    Mat3 g{};
    Vec3 d = x - center;
    double r = norm(d);
    if (r < 1e-12) return g;
    double s = (r - r0) / width;
    double b = bump(s);
    double db = bump_deriv(s) / width;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double rhat_i = d[i] / r, rhat_j = d[j] / r;
        g[i][j] = amplitude * (db * rhat_j * rhat_i +
                               b * ((i == j ? 1.0 : 0.0) / r - d[i] * d[j] / (r * r * r)));
      }
    return g;
  };
  return v;
}

VelocityField make_one_lobe_bump(const Vec3& center, double r0, double width, double amplitude,
                                 const Vec3& lobe_point, double lobe_radius) {
  VelocityField v;
  v.support_radius = width;
  v.value = [=](const Vec3& x) -> Vec3 {
    Vec3 d = x - center;
    double r = norm(d);
    if (r < 1e-12) return {0, 0, 0};
    double s = (r - r0) / width;
    double window = bump(norm(x - lobe_point) / lobe_radius);
    return (amplitude * bump(s) * window / r) * d;
  };
  return v;
}

VelocityField make_rotation_field(const LevelSet& ls, const Vec3& center, const Vec3& omega,
                                  double d0) {
  const ScalarField* phi = &ls.phi;
  VelocityField v;
  v.support_radius = d0;
  v.value = [phi, center, omega, d0](const Vec3& x) -> Vec3 {
    if (!phi->grid.contains(x)) return {0, 0, 0};
    double cut = bump(phi->interp(x) / d0);
    if (cut == 0.0) return {0, 0, 0};
    return cut * cross(omega, x - center);
  };
  return v;
}

namespace {

// Newton projection of a point onto the zero level of the spline view.
bool project_to_spline_zero(const ScalarField& phi, Vec3& x) {
  for (int it = 0; it < 40; ++it) {
    double f = phi.spline(x);
    if (std::abs(f) < 3e-15) return true;
    Vec3 g = phi.spline_gradient(x);
    double g2 = dot(g, g);
    if (g2 < 1e-12) return false;
    x = x - (f / g2) * g;
  }
  return std::abs(phi.spline(x)) < 1e-13;
}

}  // namespace

DriftReport tangential_drift_check(const LevelSet& ls, const VelocityField& v,
                                   const std::vector<double>& t_values, double tangent_tol) {
  if (t_values.size() < 3)
    throw GeometryError("tangential_drift_check: need at least 3 t values");

  InterfaceMesh mesh = extract_interface(ls);
  std::vector<Vec3> starts;
  const std::size_t cap = 2000;
  std::size_t stride = std::max<std::size_t>(1, mesh.samples.size() / cap);
  for (std::size_t i = 0; i < mesh.samples.size(); i += stride) {
    Vec3 p = mesh.samples[i].point;
    if (project_to_spline_zero(ls.phi, p)) starts.push_back(p);
  }
  if (starts.empty()) throw GeometryError("tangential_drift_check: no usable samples");

  // Precondition: tangential at the interface samples.
  double vmax = 0.0;
  for (const Vec3& p : starts) vmax = std::max(vmax, norm(v(p)));
  for (const Vec3& p : starts) {
    Vec3 g = ls.phi.spline_gradient(p);
    double vn = std::abs(dot(v(p), normalized(g)));
    if (vn > tangent_tol * std::max(1.0, vmax))
      throw GeometryError("tangential_drift_check: field is not tangential at a sample");
  }

  DriftReport rep;
  rep.t = t_values;
  rep.drift.resize(t_values.size());
  for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long long i = 0; i < (long long)starts.size(); ++i) {
      Vec3 y = flow_map(v, starts[i], t_values[ti]);
      worst = std::max(worst, std::abs(ls.phi.spline(y)));
    }
    rep.drift[ti] = worst;
  }

  rep.all_zero = true;
  for (double d : rep.drift) rep.all_zero = rep.all_zero && d < 1e-13;
  if (rep.all_zero) {
    rep.slope = 0.0;
    return rep;
  }

  // Least-squares slope in log-log coordinates.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (rep.drift[i] <= 0.0) continue;
    double lx = std::log(rep.t[i]), ly = std::log(rep.drift[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  rep.slope = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return rep;
}

double flipped_volume(const LevelSet& ls, const VelocityField& v, double t) {
  const GridSpec& g = ls.grid();
  long long flips = 0;
#pragma omp parallel for schedule(static) reduction(+ : flips)
  for (long long k = 1; k < g.n[2] - 1; ++k)
    for (int j = 1; j < g.n[1] - 1; ++j)
      for (int i = 1; i < g.n[0] - 1; ++i) {
        double f = ls.phi.at(i, j, (int)k);
        // Only nodes in the support tube can move.
        if (std::abs(f) > v.support_radius + g.hmax()) continue;
        Vec3 x = g.pos(i, j, (int)k);
        Vec3 y = flow_map(v, x, -t);
        // Both classifications taken in the same smooth view of the level
        // set, so the count measures transport, not interpolation mismatch.
        bool before = ls.phi.spline(x) > 0.0;
        bool after = ls.phi.spline(y) > 0.0;
        if (before != after) ++flips;
      }
  return double(flips) * g.h(0) * g.h(1) * g.h(2);
}

}  // namespace pbf
