#pragma once

#include <cstdint>
#include <optional>

#include "pbf/level_set.hpp"

namespace pbf {

/// 7-point variable-coefficient operator A = -div(eps grad) + d on interior
/// nodes, SPD.  Node eps comes from the level-set sign (phi <= 0 is the
/// solute value); face coefficients are the harmonic mean of the adjacent
/// node values.  Dirichlet rows are eliminated: the operator acts on interior
/// nodes only and boundary entries are treated as data.
struct EllipticOperator {
  GridSpec grid;
  double eps_minus = 1.0;
  double eps_plus = 1.0;
  std::vector<std::uint8_t> plus_mask;   // node classification, 1 = solvent
  std::vector<double> diag;              // optional nonnegative diagonal; empty = 0

  double node_eps(std::size_t idx) const { return plus_mask[idx] ? eps_plus : eps_minus; }
  double face_eps(std::size_t a, std::size_t b) const {
    double ea = node_eps(a), eb = node_eps(b);
    return ea == eb ? ea : 2.0 * ea * eb / (ea + eb);
  }

  /// out = A u on interior nodes; boundary entries of out are zeroed.
  /// Entries of u at boundary nodes are read as given values.
  void apply(const std::vector<double>& u, std::vector<double>& out) const;

  /// sum over faces of eps_f (du/h)^2 h^3 + sum d u^2 h^3: the quadratic form
  /// <A u, u> for zero-trace u, usable as a gradient-energy quadrature.
  double quadratic_form(const std::vector<double>& u) const;

  /// Jacobi diagonal of A at an interior node.
  double diagonal_entry(int i, int j, int k) const;
};

/// Builds the operator from the level-set classification.  `diag` supplies an
/// optional nonnegative node diagonal (Newton linearization term).
EllipticOperator assemble(const LevelSet& ls, double eps_minus, double eps_plus,
                          const std::optional<ScalarField>& diag = std::nullopt);

struct CgResult {
  ScalarField x;
  int iterations = 0;
  double final_relative_residual = 0.0;
  std::vector<double> residual_history;
};

/// Jacobi-preconditioned conjugate gradients for A x = rhs with homogeneous
/// Dirichlet data (x = 0 on the box boundary).  Deterministic for a fixed
/// build.  Throws SolverError when max_iter is exhausted, carrying the final
/// residual in the message.
CgResult cg_solve(const EllipticOperator& op, const ScalarField& rhs, double tol, int max_iter);

/// Dirichlet wrapper: solves A x = rhs with x = boundary on the box faces by
/// folding the boundary data into the right-hand side.
CgResult solve_dirichlet(const EllipticOperator& op, const ScalarField& rhs,
                         const ScalarField& boundary, double tol, int max_iter);

}  // namespace pbf
