#pragma once

// Sparse symmetric linear solves for the Euler-Lagrange systems.  Matrices
// are stored as the lower triangle of a symmetric matrix.  factor_solve tries
// a Cholesky-type LDLT factorization first and falls back to a sparse LU when
// the result does not meet the residual bound; a genuinely singular matrix is
// reported as an error.

#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

namespace dpgls {

class SparseSymmetric {
public:
  SparseSymmetric() = default;

  /// Builds an n x n symmetric matrix from triplets.  Every off-diagonal
  /// unordered pair must be supplied once (either (i,j) or (j,i));
  /// duplicates are summed.
  static SparseSymmetric from_triplets(int n,
                                       const std::vector<Eigen::Triplet<double>>& t);
  static SparseSymmetric from_lower(Eigen::SparseMatrix<double> lower);

  int dim() const { return static_cast<int>(lower_.rows()); }
  int nonzeros() const { return static_cast<int>(lower_.nonZeros()); }
  const Eigen::SparseMatrix<double>& lower() const { return lower_; }
  /// Largest absolute entry.
  double max_abs() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  /// Full symmetric matrix as a dense copy (diagnostics and small systems).
  Eigen::MatrixXd dense() const;

private:
  Eigen::SparseMatrix<double> lower_;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solves A x = b.  The result satisfies
///   ||A x - b|| <= 1e-10 * (max|A| * ||x|| + ||b||)
/// or a SingularMatrixError with a pivot diagnostic is thrown.
Eigen::VectorXd factor_solve(const SparseSymmetric& a, const Eigen::VectorXd& b);

}  // namespace dpgls
