#include "dpgls/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace dpgls {

Indicators compute_indicators(const Mesh& mesh, const LinearNormalSystem& linear,
                              const DiscreteSolution& x,
                              const ProblemSpec& problem) {
  const ResidualBreakdown res = residual_breakdown(mesh, linear, x, problem);
  return Indicators{res.element, res.total};
}

MarkSet doerfler_mark(const Indicators& indicators, double theta) {
  if (!(theta > 0.0) || theta > 1.0)
    throw std::invalid_argument("doerfler_mark: theta must be in (0,1]");
  const int n = static_cast<int>(indicators.element.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators.element[a] > indicators.element[b];
  });
  const double target = theta * indicators.element.squaredNorm();
  MarkSet marked;
  double sum = 0.0;
  for (int t : order) {
    if (sum >= target || indicators.element[t] == 0.0) break;
    marked.push_back(t);
    sum += indicators.element[t] * indicators.element[t];
  }
  return marked;
}

AdaptResult adapt_loop(const ProblemSpec& problem, const Mesh& initial,
                       const AdaptOptions& options) {
  if (options.mode == RefineMode::adaptive &&
      (!(options.theta > 0.0) || options.theta > 1.0))
    throw std::invalid_argument("adapt_loop: theta must be in (0,1]");
  if (options.max_elements < 1 || options.max_steps < 1)
    throw std::invalid_argument("adapt_loop: invalid limits");
  initial.validate();

  const auto dirichlet =
      options.dirichlet_vertex ? options.dirichlet_vertex : all_boundary_dirichlet();

  AdaptResult result{{}, {}, initial, DiscreteSolution{}, false};
  for (int step = 0;; ++step) {
    const auto tic = std::chrono::steady_clock::now();
    const Mesh& mesh = result.mesh;
    const TrialDofMap map = build_trial_dofmap(mesh, dirichlet);
    const LinearNormalSystem linear = assemble_linear(mesh, map, problem);
    result.solution = initial_guess(mesh, map, problem);
    const NewtonReport newton =
        newton_solve(mesh, map, linear, result.solution, problem, options.newton);

    ConvergenceRecord rec;
    rec.step = step;
    rec.n_elements = mesh.num_triangles();
    rec.n_dofs = map.total();
    rec.newton_iterations = newton.iterations;
    rec.newton_converged = newton.converged;
    const ResidualBreakdown res =
        residual_breakdown(mesh, linear, result.solution, problem);
    rec.res_dual = res.dual;
    rec.res_rho = res.rho;
    rec.res_gamma = res.gamma;
    rec.res_total = res.total;
    if (problem.exact)
      rec.errors = error_norms(mesh, result.solution, problem);
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count();
    result.records.push_back(rec);

    if (!newton.converged) {
      std::cerr << "adapt_loop: Newton did not converge on step " << step
                << " (" << mesh.num_triangles() << " elements, gradient norm "
                << newton.gradient_history.back() << ")\n";
      result.newton_failed = true;
      return result;
    }
    if (mesh.num_triangles() >= options.max_elements ||
        step + 1 >= options.max_steps)
      return result;

    if (options.mode == RefineMode::uniform) {
      MarkSet all(mesh.num_triangles());
      std::iota(all.begin(), all.end(), 0);
      Mesh once = bisect(mesh, all);
      MarkSet all2(once.num_triangles());
      std::iota(all2.begin(), all2.end(), 0);
      result.marks.push_back(std::move(all));
      result.mesh = bisect(once, all2);
    } else {
      MarkSet marked =
          doerfler_mark(Indicators{res.element, res.total}, options.theta);
      if (marked.empty()) return result;  // nothing left to refine
      result.mesh = bisect(mesh, marked);
      result.marks.push_back(std::move(marked));
    }
  }
}

}  // namespace dpgls
