#include "dpgls/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace dpgls {

SparseSymmetric SparseSymmetric::from_triplets(
    int n, const std::vector<Eigen::Triplet<double>>& t) {
  std::vector<Eigen::Triplet<double>> lower;
  lower.reserve(t.size());
  for (const auto& e : t) {
    if (e.row() < 0 || e.row() >= n || e.col() < 0 || e.col() >= n)
      throw std::invalid_argument("SparseSymmetric: triplet index out of range");
    if (!std::isfinite(e.value()))
      throw std::invalid_argument("SparseSymmetric: non-finite entry");
    lower.emplace_back(std::max(e.row(), e.col()), std::min(e.row(), e.col()),
                       e.value());
  }
  SparseSymmetric m;
  m.lower_.resize(n, n);
  m.lower_.setFromTriplets(lower.begin(), lower.end());
  return m;
}

SparseSymmetric SparseSymmetric::from_lower(Eigen::SparseMatrix<double> lower) {
  SparseSymmetric m;
  m.lower_ = std::move(lower);
  m.lower_.prune(0.0);
  m.lower_.makeCompressed();
  return m;
}

double SparseSymmetric::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < lower_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(lower_, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

Eigen::VectorXd SparseSymmetric::multiply(const Eigen::VectorXd& x) const {
  return lower_.selfadjointView<Eigen::Lower>() * x;
}

Eigen::MatrixXd SparseSymmetric::dense() const {
  const Eigen::SparseMatrix<double> full =
      lower_.selfadjointView<Eigen::Lower>();
  return Eigen::MatrixXd(full);
}

namespace {

double residual_norm(const SparseSymmetric& a, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& b) {
  return (a.multiply(x) - b).norm();
}

}  // namespace

Eigen::VectorXd factor_solve(const SparseSymmetric& a, const Eigen::VectorXd& b) {
  if (b.size() != a.dim())
    throw std::invalid_argument("factor_solve: dimension mismatch");
  if (a.dim() == 0) return Eigen::VectorXd();
  const double bound_scale = a.max_abs();
  const auto acceptable = [&](const Eigen::VectorXd& x) {
    return x.allFinite() &&
           residual_norm(a, x, b) <= 1e-10 * (bound_scale * x.norm() + b.norm());
  };

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
  ldlt.compute(a.lower());
  double min_pivot = std::numeric_limits<double>::quiet_NaN();
  if (ldlt.info() == Eigen::Success) {
    min_pivot = ldlt.vectorD().size() ? ldlt.vectorD().cwiseAbs().minCoeff() : 0.0;
    Eigen::VectorXd x = ldlt.solve(b);
    if (ldlt.info() == Eigen::Success && acceptable(x)) return x;
  }

  // LDLT without pivoting can fail on indefinite but regular matrices; retry
  // with a general sparse LU before declaring the matrix singular.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Eigen::SparseMatrix<double> full = a.lower().selfadjointView<Eigen::Lower>();
  lu.compute(full);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() == Eigen::Success && acceptable(x)) return x;
  }

  std::string msg = "factor_solve: matrix numerically singular (n = " +
                    std::to_string(a.dim());
  if (std::isfinite(min_pivot))
    msg += ", smallest LDLT pivot magnitude " + std::to_string(min_pivot);
  msg += ")";
  throw SingularMatrixError(msg);
}

}  // namespace dpgls
