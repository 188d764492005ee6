#include "pbf/elliptic.hpp"

#include <cmath>
#include <cstdio>

namespace pbf {

void EllipticOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
  const GridSpec& g = grid;
  out.assign(u.size(), 0.0);
  const double ih2[3] = {1.0 / (g.h(0) * g.h(0)), 1.0 / (g.h(1) * g.h(1)),
                         1.0 / (g.h(2) * g.h(2))};
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
#pragma omp parallel for schedule(static)
  for (long long k = 1; k < nz - 1; ++k)
    for (int j = 1; j < ny - 1; ++j)
      for (int i = 1; i < nx - 1; ++i) {
        std::size_t c = g.index(i, j, (int)k);
        double uc = u[c];
        double acc = diag.empty() ? 0.0 : diag[c] * uc;
        const std::size_t nb[6] = {c - 1, c + 1, c - nx, c + nx,
                                   c - std::size_t(nx) * ny, c + std::size_t(nx) * ny};
        const int ax[6] = {0, 0, 1, 1, 2, 2};
        for (int f = 0; f < 6; ++f) {
          double ef = face_eps(c, nb[f]);
          acc += ef * (uc - u[nb[f]]) * ih2[ax[f]];
        }
        out[c] = acc;
      }
}

double EllipticOperator::quadratic_form(const std::vector<double>& u) const {
  const GridSpec& g = grid;
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double cellvol = g.h(0) * g.h(1) * g.h(2);
  const std::size_t nchunks = std::size_t(nz);
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < nz; ++k) {
    double s = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t c = g.index(i, j, (int)k);
        if (!diag.empty()) s += diag[c] * u[c] * u[c] * cellvol;
        // Each face counted once: the +x, +y, +z neighbors.
        if (i + 1 < nx) {
          double d = (u[c + 1] - u[c]) / g.h(0);
          s += face_eps(c, c + 1) * d * d * cellvol;
        }
        if (j + 1 < ny) {
          double d = (u[c + nx] - u[c]) / g.h(1);
          s += face_eps(c, c + nx) * d * d * cellvol;
        }
        if (k + 1 < nz) {
          std::size_t up = c + std::size_t(nx) * ny;
          double d = (u[up] - u[c]) / g.h(2);
          s += face_eps(c, up) * d * d * cellvol;
        }
      }
    partial[k] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double EllipticOperator::diagonal_entry(int i, int j, int k) const {
  const GridSpec& g = grid;
  std::size_t c = g.index(i, j, k);
  const int nx = g.n[0], ny = g.n[1];
  const std::size_t nb[6] = {c - 1, c + 1, c - nx, c + nx, c - std::size_t(nx) * ny,
                             c + std::size_t(nx) * ny};
  const int ax[6] = {0, 0, 1, 1, 2, 2};
  double acc = diag.empty() ? 0.0 : diag[c];
  for (int f = 0; f < 6; ++f) acc += face_eps(c, nb[f]) / (g.h(ax[f]) * g.h(ax[f]));
  return acc;
}

EllipticOperator assemble(const LevelSet& ls, double eps_minus, double eps_plus,
                          const std::optional<ScalarField>& diag) {
  if (!(eps_minus > 0.0) || !(eps_plus > 0.0))
    throw ConfigError("assemble: dielectric coefficients must be positive");
  EllipticOperator op;
  op.grid = ls.grid();
  op.eps_minus = eps_minus;
  op.eps_plus = eps_plus;
  op.plus_mask.resize(op.grid.size());
  for (std::size_t idx = 0; idx < op.plus_mask.size(); ++idx)
    op.plus_mask[idx] = ls.is_plus(idx) ? 1 : 0;
  if (diag) {
    if (!(diag->grid == op.grid)) throw ConfigError("assemble: diagonal on a different grid");
    for (double d : diag->v)
      if (d < 0.0) throw ConfigError("assemble: diagonal term must be nonnegative");
    op.diag = diag->v;
  }
  return op;
}

namespace {

// boundary entries are kept at zero by construction
double interior_norm(const std::vector<double>& r) { return std::sqrt(det_dot(r, r)); }

}  // namespace

CgResult cg_solve(const EllipticOperator& op, const ScalarField& rhs, double tol, int max_iter) {
  const GridSpec& g = op.grid;
  if (!(rhs.grid == g)) throw ConfigError("cg_solve: rhs grid mismatch");

  const std::size_t n = g.size();
  std::vector<double> b = rhs.v;
  // Homogeneous Dirichlet: zero the boundary entries of b.
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (g.on_boundary(i, j, k)) b[g.index(i, j, k)] = 0.0;

  CgResult res;
  res.x = ScalarField(g, 0.0, rhs.tag);
  double bnorm = interior_norm(b);
  if (bnorm == 0.0) {
    res.final_relative_residual = 0.0;
    return res;
  }

  std::vector<double> inv_diag(n, 0.0);
#pragma omp parallel for schedule(static)
  for (long long k = 1; k < nz - 1; ++k)
    for (int j = 1; j < ny - 1; ++j)
      for (int i = 1; i < nx - 1; ++i)
        inv_diag[g.index(i, j, (int)k)] = 1.0 / op.diagonal_entry(i, j, (int)k);

  std::vector<double>& x = res.x.v;
  std::vector<double> r = b, z(n, 0.0), p(n, 0.0), ap(n, 0.0);

  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < (long long)n; ++idx) out[idx] = in[idx] * inv_diag[idx];
  };

  precondition(r, z);
  p = z;
  double rz = det_dot(r, z);
  double rel = 1.0;
  res.residual_history.push_back(rel);
  for (int it = 0; it < max_iter; ++it) {
    op.apply(p, ap);
    double pap = det_dot(p, ap);
    if (pap <= 0.0) throw SolverError("cg_solve: operator is not positive definite");
    double alpha = rz / pap;
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < (long long)n; ++idx) {
      x[idx] += alpha * p[idx];
      r[idx] -= alpha * ap[idx];
    }
    double rnorm = interior_norm(r);
    rel = rnorm / bnorm;
    res.residual_history.push_back(rel);
    res.iterations = it + 1;
    if (rel <= tol) {
      res.final_relative_residual = rel;
      return res;
    }
    precondition(r, z);
    double rz_next = det_dot(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < (long long)n; ++idx) p[idx] = z[idx] + beta * p[idx];
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "cg_solve: no convergence after %d iterations (relative residual %.3e)", max_iter,
                rel);
  throw SolverError(msg);
}

CgResult solve_dirichlet(const EllipticOperator& op, const ScalarField& rhs,
                         const ScalarField& boundary, double tol, int max_iter) {
  const GridSpec& g = op.grid;
  if (!(boundary.grid == g)) throw ConfigError("solve_dirichlet: boundary grid mismatch");

  // Fold boundary data into the right-hand side: b_i += eps_f g_nb / h^2 for
  // interior nodes adjacent to the boundary.
  ScalarField b = rhs;
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double ih2[3] = {1.0 / (g.h(0) * g.h(0)), 1.0 / (g.h(1) * g.h(1)),
                         1.0 / (g.h(2) * g.h(2))};
  for (int k = 1; k < nz - 1; ++k)
    for (int j = 1; j < ny - 1; ++j)
      for (int i = 1; i < nx - 1; ++i) {
        std::size_t c = g.index(i, j, k);
        const int di[6] = {-1, 1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, -1, 1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, -1, 1};
        const int ax[6] = {0, 0, 1, 1, 2, 2};
        for (int f = 0; f < 6; ++f) {
          int ii = i + di[f], jj = j + dj[f], kk = k + dk[f];
          if (!g.on_boundary(ii, jj, kk)) continue;
          std::size_t nb = g.index(ii, jj, kk);
          b.v[c] += op.face_eps(c, nb) * boundary.v[nb] * ih2[ax[f]];
        }
      }

  CgResult res = cg_solve(op, b, tol, max_iter);
  // Attach the boundary trace to the solution field.
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (g.on_boundary(i, j, k)) res.x.v[g.index(i, j, k)] = boundary.v[g.index(i, j, k)];
  return res;
}

}  // namespace pbf
