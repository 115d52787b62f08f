#pragma once

// Global assembly of the normal equations of the linear part of the residual
// minimization, and evaluation of the discrete-dual residual norm
//   ||B w - L||_{V_h'}^2 = sum_T r_T' G_T^{-1} r_T,   r_T = B_T w_T - L_T.

#include <vector>

#include "dpgls/linsolve.hpp"
#include "dpgls/local_system.hpp"

namespace dpgls {

struct LinearNormalSystem {
  /// sum_T B_T' G_T^{-1} B_T restricted to free dofs.
  SparseSymmetric a;
  /// sum_T B_T' G_T^{-1} L_T on free dofs, minus the columns of eliminated
  /// Dirichlet vertices times their boundary values.
  Eigen::VectorXd rhs;
  /// Cached local systems, one per element.
  std::vector<LocalSystem> local;
};

/// Dirichlet vertex values are taken from problem.dirichlet.
LinearNormalSystem assemble_linear(const Mesh& mesh, const TrialDofMap& map,
                                   const ProblemSpec& problem);

struct DualResidual {
  double total = 0.0;                 // square root of the sum of squares
  Eigen::VectorXd element;            // per-element contributions (not squared)
};

DualResidual dual_residual(const Mesh& mesh, const LinearNormalSystem& system,
                           const DiscreteSolution& x);

}  // namespace dpgls
