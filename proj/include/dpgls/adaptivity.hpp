#pragma once

// Adaptive loop: solve -> estimate -> mark -> refine.  The error indicators
// are the per-element contributions to the residual quantity the method
// minimizes; marking uses the bulk (Doerfler) criterion with a greedy
// minimal-cardinality selection.

#include <optional>

#include "dpgls/newton.hpp"

namespace dpgls {

struct Indicators {
  Eigen::VectorXd element;  // eta_T
  double total = 0.0;       // sqrt(sum eta_T^2)
};

/// Indicators at a state (normally the converged Newton solution).
Indicators compute_indicators(const Mesh& mesh, const LinearNormalSystem& linear,
                              const DiscreteSolution& x, const ProblemSpec& problem);

/// Smallest prefix of the indicator ranking (descending values, ascending
/// index on ties) whose squared sum reaches theta * total^2.  Requires
/// theta in (0,1].  All-zero indicators yield an empty set.
MarkSet doerfler_mark(const Indicators& indicators, double theta);

enum class RefineMode { uniform, adaptive };

struct AdaptOptions {
  RefineMode mode = RefineMode::uniform;
  double theta = 0.5;                  // bulk parameter, adaptive mode only
  int max_elements = 100000;           // stop once reached or exceeded
  int max_steps = 1000;
  NewtonOptions newton;
  /// Dirichlet part of the boundary; defaults to the whole boundary.
  std::function<bool(int, const Vec2&)> dirichlet_vertex;
};

struct ConvergenceRecord {
  int step = 0;
  int n_elements = 0;
  int n_dofs = 0;
  int newton_iterations = 0;
  bool newton_converged = false;
  double res_dual = 0.0;
  double res_rho = 0.0;
  double res_gamma = 0.0;
  double res_total = 0.0;
  std::optional<ErrorNorms> errors;
  double seconds = 0.0;  // wall-clock time of the step (not part of the CSV)
};

struct AdaptResult {
  std::vector<ConvergenceRecord> records;
  std::vector<MarkSet> marks;  // marks[i] refined mesh i into mesh i+1
  Mesh mesh;                   // final mesh
  DiscreteSolution solution;   // final Newton iterate
  bool newton_failed = false;
};

/// Runs the loop on the given initial mesh until max_elements is reached (the
/// step that reaches it is still solved), max_steps were done, or the
/// adaptive marker returns an empty set.  In uniform mode each refinement
/// performs two mark-all bisection sweeps, which splits every triangle into
/// four and halves the mesh size.  Newton failure stops the loop with the
/// records collected so far and newton_failed set.
AdaptResult adapt_loop(const ProblemSpec& problem, const Mesh& initial,
                       const AdaptOptions& options);

}  // namespace dpgls
