#include "dpgls/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace dpgls {

LinearNormalSystem assemble_linear(const Mesh& mesh, const TrialDofMap& map,
                                   const ProblemSpec& problem) {
  LinearNormalSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(map.total());
  sys.local.reserve(mesh.num_triangles());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * mesh.num_triangles());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    LocalSystem ls = build_local_system(mesh, map, problem, t);
    const LocalB ginv_b = ls.gram_llt.solve(ls.b);
    const Eigen::Matrix<double, kLocalTrial, kLocalTrial> a_t =
        ls.b.transpose() * ginv_b;
    const Eigen::Matrix<double, kLocalTrial, 1> l_t =
        ginv_b.transpose() * ls.load;

    for (int i = 0; i < kLocalTrial; ++i) {
      const int gi = ls.column_dof[i];
      if (gi < 0) continue;
      sys.rhs[gi] += l_t[i];
      for (int j = 0; j < kLocalTrial; ++j) {
        const int gj = ls.column_dof[j];
        if (gj < 0) {
          // Eliminated Dirichlet column: move it to the right-hand side.
          sys.rhs[gi] -= a_t(i, j) * problem.dirichlet(mesh.vertex(ls.vertices[j]));
        } else if (gj <= gi) {
          triplets.emplace_back(gi, gj, a_t(i, j));
        }
      }
    }
    sys.local.push_back(std::move(ls));
  }
  sys.a = SparseSymmetric::from_triplets(map.total(), triplets);
  return sys;
}

DualResidual dual_residual(const Mesh& mesh, const LinearNormalSystem& system,
                           const DiscreteSolution& x) {
  DualResidual res;
  res.element = Eigen::VectorXd::Zero(mesh.num_triangles());
  double sum = 0.0;
  for (const LocalSystem& ls : system.local) {
    const LocalLoad r_t = ls.b * ls.gather(mesh, x) - ls.load;
    // r' G^{-1} r is nonnegative up to roundoff.
    const double sq = std::max(0.0, r_t.dot(ls.gram_llt.solve(r_t)));
    res.element[ls.element] = std::sqrt(sq);
    sum += sq;
  }
  res.total = std::sqrt(sum);
  return res;
}

}  // namespace dpgls
