#pragma once

// Experiment driver behind the command-line tool: configures one of the
// benchmark problems (or a caller-supplied one), runs the refinement loop,
// writes the convergence history as CSV and reports log-log convergence
// rates.

#include <iosfwd>
#include <optional>
#include <string>

#include "dpgls/adaptivity.hpp"

namespace dpgls {

enum class ProblemChoice { ex1, ex2, custom };

struct RunConfig {
  ProblemChoice problem = ProblemChoice::ex1;
  RefineMode mode = RefineMode::uniform;
  double theta = 0.5;
  int n0 = 0;  // initial mesh parameter; 0 picks the per-problem default
  int max_elements = 100000;
  double newton_tol = 1e-6;
  int newton_max_iterations = 20;
  int rate_window = 4;  // trailing records used for the rate fit
  std::string out_csv;        // empty: stdout
  std::string fields_prefix;  // empty: no field export
  bool quiet = false;
  // For ProblemChoice::custom (library use only, not reachable from the CLI).
  std::optional<ProblemSpec> custom_problem;
  std::optional<Mesh> custom_mesh;
};

struct RateEntry {
  std::string quantity;
  double slope = 0.0;
};

struct RateReport {
  std::vector<RateEntry> entries;
  int window = 0;  // number of records used
};

/// Least-squares slopes of log(quantity) vs log(N) over the trailing k
/// records (fewer if the history is shorter).  Quantities with nonpositive
/// or missing values are skipped.  Requires at least two records.
RateReport estimate_rates(const std::vector<ConvergenceRecord>& records, int k);

/// CSV with the fixed header
/// step,N,dofs,newton_iters,res_dual,res_rho,res_gamma,Res,err_grad_u,err_q,err_r,err_u_L2,err_U
/// and one row per record; error columns are empty when no exact solution
/// was available.  Identical histories produce identical bytes.
void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out);

/// Writes <prefix>.mesh (mesh dump), <prefix>.u (one u_h value per vertex)
/// and <prefix>.qr (one "q r" pair per element).
void export_fields(const Mesh& mesh, const DiscreteSolution& solution,
                   const std::string& prefix);

/// Exit status: 0 on success, 2 when Newton fails (the partial CSV is still
/// written).  Configuration errors throw std::invalid_argument.
int run(const RunConfig& config);

/// Parses "key = value" lines (# comments allowed) into a RunConfig.
/// Unknown keys are rejected.
RunConfig parse_config_file(std::istream& in);

}  // namespace dpgls
