#pragma once

#include "pbf/pb.hpp"
#include "pbf/velocity.hpp"

namespace pbf {

/// One-sided interface data for a single surface sample.
struct TraceRow {
  Vec3 point;
  Vec3 normal;
  double area = 0.0;

  double psi_minus = 0.0;  // one-sided trace values of psi at the interface
  double psi_plus = 0.0;
  double dn_psi_minus = 0.0;  // one-sided normal derivatives
  double dn_psi_plus = 0.0;
  double flux_psi_minus = 0.0;  // eps_- dn psi^-
  double flux_psi_plus = 0.0;   // eps_+ dn psi^+
  double flux_psi = 0.0;  // common eps dn psi: mean of the two one-sided fluxes
  Vec3 grad_tan_psi{};    // tangential gradient, side-averaged

  double phi_gi = 0.0;  // Dirichlet field trace (continuous across the interface)
  double dn_phi_gi_minus = 0.0;
  double dn_phi_gi_plus = 0.0;
  double flux_phi_gi = 0.0;
  Vec3 grad_tan_phi_gi{};

  double boltzmann_arg = 0.0;  // psi - phi_gi/2, solvent-side trace
};

struct SurfaceTraces {
  std::vector<TraceRow> rows;

  /// Worst relative one-sided flux mismatch over the samples.
  double worst_flux_jump() const;
  double median_flux_jump() const;
};

/// Linear one-sided fits to the grid fields in the band [1h, 3h] on each side
/// of every sample.  Throws SolverError naming the sample when fewer than 4
/// usable nodes exist on a side.
SurfaceTraces extract_traces(const PBSolution& sol, const InterfaceMesh& mesh);

/// Per-sample boundary variation density for a general boundary trace:
///   q = -1/2 (1/ep - 1/em)(F^2 - F Fgi)
///       + (ep - em)/2 (|gt psi|^2 - gt psi . gt phi_gi)
///       + B(psi - phi_gi/2)
/// with F the common normal flux of psi and Fgi that of the Dirichlet field.
std::vector<double> force_density(const SurfaceTraces& traces, const IonModel& ions,
                                  double eps_minus, double eps_plus);

/// Independent coding of the reduced homogeneous-trace formula (all Dirichlet
/// entries dropped); must agree with force_density when the trace is zero.
std::vector<double> force_density_homogeneous(const SurfaceTraces& traces, const IonModel& ions,
                                              double eps_minus, double eps_plus);

/// Three-term split of the same density (normal-flux, tangential, Boltzmann).
struct ForceDecomposition {
  std::vector<double> normal_term;
  std::vector<double> tangential_term;
  std::vector<double> boltzmann_term;
  std::vector<double> total;
};
ForceDecomposition force_decomposition(const SurfaceTraces& traces, const IonModel& ions,
                                       double eps_minus, double eps_plus);

/// sum over samples of q (V . n) dS: the first variation of the energy in
/// the direction of V.
double integrate_variation(const std::vector<double>& q, const SurfaceTraces& traces,
                           const VelocityField& v);

/// Per-sample relative mismatch of the one-sided fluxes of psi.
std::vector<double> interface_flux_jump(const PBSolution& sol, const InterfaceMesh& mesh);

}  // namespace pbf
