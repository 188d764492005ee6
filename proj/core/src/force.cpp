#include "pbf/force.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pbf {

namespace {

// Affine least-squares model f ~ a + g . (x - p) over a one-sided node set.
struct AffineFit {
  double value = 0.0;
  Vec3 gradient{};
};

struct FitNodes {
  std::vector<std::size_t> idx;
  std::vector<Vec3> offset;  // x_node - p
};

// Nodes strictly on one side (sign = +1 solvent, -1 solute) with normal
// coordinate in [1h, 3h], at least 1h away from the interface, and within a
// transverse window.  One relaxation pass widens the windows before the
// thin-region error fires.
FitNodes collect_side_nodes(const LevelSet& ls, const Vec3& p, const Vec3& n, int sign,
                            std::size_t sample_id) {
  const GridSpec& g = ls.grid();
  const double h = g.hmax();
  auto gather = [&](double smin, double smax, double trans) {
    FitNodes out;
    int ilo[3], ihi[3];
    for (int a = 0; a < 3; ++a) {
      ilo[a] = std::max(0, int(std::floor((p[a] - smax - trans - g.lo[a]) / g.h(a))));
      ihi[a] = std::min(g.n[a] - 1, int(std::ceil((p[a] + smax + trans - g.lo[a]) / g.h(a))));
    }
    for (int k = ilo[2]; k <= ihi[2]; ++k)
      for (int j = ilo[1]; j <= ihi[1]; ++j)
        for (int i = ilo[0]; i <= ihi[0]; ++i) {
          std::size_t c = g.index(i, j, k);
          double phi = ls.phi.v[c];
          if (sign > 0 ? !(phi > 0.0) : (phi > 0.0)) continue;
          if (std::abs(phi) < 0.999 * h) continue;  // too close to the interface
          Vec3 d = g.pos(i, j, k) - p;
          double s = dot(d, n) * sign;
          if (s < smin || s > smax) continue;
          Vec3 tang = d - (dot(d, n)) * n;
          if (norm(tang) > trans) continue;
          out.idx.push_back(c);
          out.offset.push_back(d);
        }
    return out;
  };
  FitNodes nodes = gather(1.0 * h, 3.0 * h, 2.0 * h);
  if (nodes.idx.size() < 4) nodes = gather(0.8 * h, 3.6 * h, 3.0 * h);
  if (nodes.idx.size() < 4) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "extract_traces: thin region at sample %zu (%zu usable nodes on side %+d)",
                  sample_id, nodes.idx.size(), sign);
    throw SolverError(msg);
  }
  return nodes;
}

// Normal-equation solve for the affine model shared by all fields on the
// same node set.
struct FitSolver {
  const FitNodes* nodes;
  double ata[4][4] = {};
  double lu[4][4] = {};
  int piv[4] = {};

  explicit FitSolver(const FitNodes& n) : nodes(&n) {
    for (std::size_t m = 0; m < n.idx.size(); ++m) {
      double row[4] = {1.0, n.offset[m][0], n.offset[m][1], n.offset[m][2]};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ata[a][b] += row[a] * row[b];
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) lu[a][b] = ata[a][b];
    // LU with partial pivoting
    for (int col = 0; col < 4; ++col) {
      int best = col;
      for (int r = col + 1; r < 4; ++r)
        if (std::abs(lu[r][col]) > std::abs(lu[best][col])) best = r;
      piv[col] = best;
      if (best != col)
        for (int b = 0; b < 4; ++b) std::swap(lu[col][b], lu[best][b]);
      for (int r = col + 1; r < 4; ++r) {
        lu[r][col] /= lu[col][col];
        for (int b = col + 1; b < 4; ++b) lu[r][b] -= lu[r][col] * lu[col][b];
      }
    }
  }

  AffineFit fit(const std::vector<double>& field) const {
    double atb[4] = {};
    for (std::size_t m = 0; m < nodes->idx.size(); ++m) {
      double f = field[nodes->idx[m]];
      double row[4] = {1.0, nodes->offset[m][0], nodes->offset[m][1], nodes->offset[m][2]};
      for (int a = 0; a < 4; ++a) atb[a] += row[a] * f;
    }
    // apply pivots, forward/back substitution
    for (int col = 0; col < 4; ++col)
      if (piv[col] != col) std::swap(atb[col], atb[piv[col]]);
    for (int r = 1; r < 4; ++r)
      for (int c = 0; c < r; ++c) atb[r] -= lu[r][c] * atb[c];
    for (int r = 3; r >= 0; --r) {
      for (int c = r + 1; c < 4; ++c) atb[r] -= lu[r][c] * atb[c];
      atb[r] /= lu[r][r];
    }
    return {atb[0], {atb[1], atb[2], atb[3]}};
  }
};

}  // namespace

double SurfaceTraces::worst_flux_jump() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    double denom = std::max(std::abs(r.flux_psi_plus), std::abs(r.flux_psi_minus));
    if (denom > 0) worst = std::max(worst, std::abs(r.flux_psi_plus - r.flux_psi_minus) / denom);
  }
  return worst;
}

double SurfaceTraces::median_flux_jump() const {
  std::vector<double> jumps;
  for (const auto& r : rows) {
    double denom = std::max(std::abs(r.flux_psi_plus), std::abs(r.flux_psi_minus));
    if (denom > 0) jumps.push_back(std::abs(r.flux_psi_plus - r.flux_psi_minus) / denom);
  }
  if (jumps.empty()) return 0.0;
  std::nth_element(jumps.begin(), jumps.begin() + jumps.size() / 2, jumps.end());
  return jumps[jumps.size() / 2];
}

SurfaceTraces extract_traces(const PBSolution& sol, const InterfaceMesh& mesh) {
  const LevelSet& ls = sol.ls;
  const double h = ls.grid().hmax();
  const bool has_gi = !sol.sys.boundary.is_zero();

  // Regular part of psi on nodes; Coulomb contributions enter analytically.
  ScalarField reg = sol.psi_regular();

  SurfaceTraces traces;
  traces.rows.resize(mesh.samples.size());

#pragma omp parallel for schedule(static)
  for (long long si = 0; si < (long long)mesh.samples.size(); ++si) {
    const SurfaceSample& smp = mesh.samples[si];
    TraceRow row;
    row.point = smp.point;
    row.normal = smp.normal;
    row.area = smp.area;

    FitNodes plus_nodes = collect_side_nodes(ls, smp.point, smp.normal, +1, si);
    FitNodes minus_nodes = collect_side_nodes(ls, smp.point, smp.normal, -1, si);
    FitSolver plus_fit(plus_nodes), minus_fit(minus_nodes);

    Vec3 grad_c = coulomb_gradient(sol.sys.charges, sol.sys.eps_minus, smp.point);
    double val_c = coulomb_potential(sol.sys.charges, sol.sys.eps_minus, smp.point);
    double dn_c = dot(grad_c, smp.normal);

    AffineFit rp = plus_fit.fit(reg.v);
    AffineFit rm = minus_fit.fit(reg.v);
    row.psi_plus = rp.value + val_c;
    row.psi_minus = rm.value + val_c;
    row.dn_psi_plus = dot(rp.gradient, smp.normal) + dn_c;
    row.dn_psi_minus = dot(rm.gradient, smp.normal) + dn_c;
    row.flux_psi_plus = sol.sys.eps_plus * row.dn_psi_plus;
    row.flux_psi_minus = sol.sys.eps_minus * row.dn_psi_minus;
    row.flux_psi = 0.5 * (row.flux_psi_plus + row.flux_psi_minus);

    // Tangential gradient of psi: interpolated node gradients of the regular
    // part at offset points on either side, projected and averaged, plus the
    // analytic Coulomb part at the sample.
    Mat3 proj = tangential_projector(smp.normal);
    Vec3 gp = reg.interp_gradient(smp.point + (1.5 * h) * smp.normal);
    Vec3 gm = reg.interp_gradient(smp.point - (1.5 * h) * smp.normal);
    row.grad_tan_psi = mat_vec(proj, 0.5 * (gp + gm) + grad_c);

    if (has_gi) {
      AffineFit gip = plus_fit.fit(sol.phi_gamma_inf.v);
      AffineFit gim = minus_fit.fit(sol.phi_gamma_inf.v);
      row.phi_gi = 0.5 * (gip.value + gim.value);
      row.dn_phi_gi_plus = dot(gip.gradient, smp.normal);
      row.dn_phi_gi_minus = dot(gim.gradient, smp.normal);
      row.flux_phi_gi =
          0.5 * (sol.sys.eps_plus * row.dn_phi_gi_plus + sol.sys.eps_minus * row.dn_phi_gi_minus);
      Vec3 gg = 0.5 * (sol.phi_gamma_inf.interp_gradient(smp.point + (1.5 * h) * smp.normal) +
                       sol.phi_gamma_inf.interp_gradient(smp.point - (1.5 * h) * smp.normal));
      row.grad_tan_phi_gi = mat_vec(proj, gg);
    }
    row.boltzmann_arg = row.psi_plus - 0.5 * row.phi_gi;
    traces.rows[si] = row;
  }
  return traces;
}

ForceDecomposition force_decomposition(const SurfaceTraces& traces, const IonModel& ions,
                                       double eps_minus, double eps_plus) {
  ForceDecomposition d;
  const std::size_t n = traces.rows.size();
  d.normal_term.resize(n);
  d.tangential_term.resize(n);
  d.boltzmann_term.resize(n);
  d.total.resize(n);
  const double inv_jump = 1.0 / eps_plus - 1.0 / eps_minus;
  const double eps_jump = eps_plus - eps_minus;
  for (std::size_t i = 0; i < n; ++i) {
    const TraceRow& r = traces.rows[i];
    double f = r.flux_psi, fgi = r.flux_phi_gi;
    d.normal_term[i] = -0.5 * inv_jump * (f * f - f * fgi);
    d.tangential_term[i] =
        0.5 * eps_jump * (dot(r.grad_tan_psi, r.grad_tan_psi) -
                          dot(r.grad_tan_psi, r.grad_tan_phi_gi));
    d.boltzmann_term[i] = ions.empty() ? 0.0 : b_value(ions, r.boltzmann_arg);
    d.total[i] = d.normal_term[i] + d.tangential_term[i] + d.boltzmann_term[i];
  }
  return d;
}

std::vector<double> force_density(const SurfaceTraces& traces, const IonModel& ions,
                                  double eps_minus, double eps_plus) {
  return force_decomposition(traces, ions, eps_minus, eps_plus).total;
}

std::vector<double> force_density_homogeneous(const SurfaceTraces& traces, const IonModel& ions,
                                              double eps_minus, double eps_plus) {
  std::vector<double> q(traces.rows.size());
  const double inv_jump = 1.0 / eps_plus - 1.0 / eps_minus;
  const double eps_jump = eps_plus - eps_minus;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const TraceRow& r = traces.rows[i];
    q[i] = -0.5 * inv_jump * r.flux_psi * r.flux_psi +
           0.5 * eps_jump * dot(r.grad_tan_psi, r.grad_tan_psi) +
           (ions.empty() ? 0.0 : b_value(ions, r.psi_plus));
  }
  return q;
}

double integrate_variation(const std::vector<double>& q, const SurfaceTraces& traces,
                           const VelocityField& v) {
  if (q.size() != traces.rows.size())
    throw ConfigError("integrate_variation: density/trace size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const TraceRow& r = traces.rows[i];
    acc += q[i] * dot(v(r.point), r.normal) * r.area;
  }
  return acc;
}

std::vector<double> interface_flux_jump(const PBSolution& sol, const InterfaceMesh& mesh) {
  SurfaceTraces traces = extract_traces(sol, mesh);
  std::vector<double> out(traces.rows.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const TraceRow& r = traces.rows[i];
    double denom = std::max(std::abs(r.flux_psi_plus), std::abs(r.flux_psi_minus));
    out[i] = denom > 0 ? std::abs(r.flux_psi_plus - r.flux_psi_minus) / denom : 0.0;
  }
  return out;
}

}  // namespace pbf
