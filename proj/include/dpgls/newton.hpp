#pragma once

// Nonlinear layer: the discrete minimization problem
//   min over w_h of ||B w_h - L||_{V_h'}^2 + ||rho(u_h) - q_h||^2
//                                          + ||gamma(u_h) - r_h||^2
// is solved via Newton's method applied to its Euler-Lagrange system.  The
// nonlinear L2 terms are evaluated with the degree-2 (3-point) rule both in
// the objective derivatives and in the Jacobian; the residual quantities
// reported to the caller use the degree-5 (7-point) rule.

#include <vector>

#include "dpgls/assembly.hpp"

namespace dpgls {

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gradient of the squared residual functional (up to the constant factor 2)
/// with respect to the free dofs:  A x - rhs + nonlinear coupling terms.
/// Throws NonFiniteError when rho/gamma overflow at a quadrature point.
Eigen::VectorXd el_residual(const Mesh& mesh, const TrialDofMap& map,
                            const LinearNormalSystem& linear,
                            const DiscreteSolution& x,
                            const ProblemSpec& problem);

/// Hessian of the same functional: the linear normal matrix plus
/// second-order terms of the nonlinear couplings.  Symmetric.
SparseSymmetric el_jacobian(const Mesh& mesh, const TrialDofMap& map,
                            const LinearNormalSystem& linear,
                            const DiscreteSolution& x,
                            const ProblemSpec& problem);

/// Trivial initial guess: u_h interpolates the Dirichlet datum at Dirichlet
/// vertices and vanishes elsewhere; sigma, q, r vanish.
DiscreteSolution initial_guess(const Mesh& mesh, const TrialDofMap& map,
                               const ProblemSpec& problem);

/// Residual quantities at a state: the dual norm contribution, the two L2
/// mismatch norms (7-point rule) and per-element combined indicators
///   eta_T^2 = dual_T^2 + ||rho(u_h)-q_h||_T^2 + ||gamma(u_h)-r_h||_T^2.
struct ResidualBreakdown {
  double dual = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  double total = 0.0;          // sqrt(dual^2 + rho^2 + gamma^2)
  Eigen::VectorXd element;     // eta_T (not squared)
};

ResidualBreakdown residual_breakdown(const Mesh& mesh,
                                     const LinearNormalSystem& linear,
                                     const DiscreteSolution& x,
                                     const ProblemSpec& problem);

struct NewtonOptions {
  double tol = 1e-6;        // on the Euclidean norm of the EL gradient
  int max_iterations = 20;  // Newton steps, not residual evaluations
  bool step_halving = false;
  int max_halvings = 8;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;                     // steps taken
  std::vector<double> gradient_history;   // EL gradient norm per iterate
  std::vector<double> residual_history;   // combined residual per iterate
  double final_residual = 0.0;            // last entry of residual_history
  int descent_violations = 0;             // objective increases after a step
};

/// Full Newton iteration on the Euler-Lagrange system.  Stops when the EL
/// gradient norm falls below tol (checked before stepping, so a stationary
/// start reports zero iterations).  Dirichlet slots of x are never modified.
NewtonReport newton_solve(const Mesh& mesh, const TrialDofMap& map,
                          const LinearNormalSystem& linear, DiscreteSolution& x,
                          const ProblemSpec& problem,
                          const NewtonOptions& options = {});

/// Errors against the exact solution (7-point rule); requires problem.exact.
ErrorNorms error_norms(const Mesh& mesh, const DiscreteSolution& x,
                       const ProblemSpec& problem);

}  // namespace dpgls
