#pragma once

// Element-local building blocks of the minimum-residual method.  On each
// element the broken test space is P1 plus the cubic bubble (dimension 4);
// the local trial contributions are the three vertex hats, the three facet
// constants and the two element constants, giving the 4 x 8 matrix B_T with
// column order (u0, u1, u2, s0, s1, s2, q, r).  The test-space inner product
// is the full H1 product <v,w> + <grad v, grad w> on the element.

#include <array>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "dpgls/dofmap.hpp"
#include "dpgls/problem.hpp"
#include "dpgls/shape.hpp"

namespace dpgls {

inline constexpr int kLocalTrial = 8;

using LocalGram = Eigen::Matrix<double, kTestDim, kTestDim>;
using LocalB = Eigen::Matrix<double, kTestDim, kLocalTrial>;
using LocalLoad = Eigen::Matrix<double, kTestDim, 1>;

/// H1(T) Gram matrix of the test basis.  Throws on degenerate elements
/// (the matrix must be positive definite).
LocalGram local_gram(const ElementGeometry& g);

/// Trial-test coupling matrix: rows are tests, columns as above hold
///   (kappa grad u_j + q beta) . grad v  over the element,
///   -sign(T,F) |F|-weighted facet traces of v, and  r v  terms.
/// Rejects non-symmetric or non-positive-definite kappa samples.
LocalB local_B(const Mesh& mesh, int t, const ProblemSpec& problem);

/// Load vector <f, v>_T evaluated with the degree-5 rule.
LocalLoad local_load(const ElementGeometry& g, const ScalarField& f);

/// Everything the global loops need per element, with the Gram factorization
/// cached.
struct LocalSystem {
  int element = -1;
  std::array<int, 3> vertices{};
  std::array<int, 8> column_dof{};  // free dof id, -1 for Dirichlet u columns
  LocalGram gram;
  Eigen::LLT<LocalGram> gram_llt;
  LocalB b;
  LocalLoad load;

  /// Local coefficient vector of a discrete function on this element.
  Eigen::Matrix<double, kLocalTrial, 1> gather(const Mesh& mesh,
                                               const DiscreteSolution& x) const;
};

LocalSystem build_local_system(const Mesh& mesh, const TrialDofMap& map,
                               const ProblemSpec& problem, int t);

}  // namespace dpgls
