#pragma once

// Quadrature rules in barycentric coordinates.  Triangle weights sum to the
// reference measure 1/2, so an integral over a physical triangle T is
//   int_T g = 2*|T| * sum_k w_k g(x_k),   x_k = sum_i lambda_k[i] * v_i.
// Edge rules live on [0,1] with weights summing to 1.

#include <array>
#include <vector>

namespace dpgls {

struct QuadRule {
  std::vector<std::array<double, 3>> points;  // barycentric coordinates
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

enum class TriangleRule {
  nonlinear_3pt,  // edge midpoints, degree 2; evaluates the nonlinear terms
  residual_7pt,   // degree 5; evaluates residual norms and error norms
  assembly_12pt,  // degree 6; assembles the local Gram and trial-test matrices
};

/// Returns the requested rule; throws std::invalid_argument for an unknown
/// enumerator value.
const QuadRule& triangle_quadrature(TriangleRule rule);

struct EdgeRule {
  std::vector<double> points;  // in [0,1]
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre rule with n points mapped to [0,1]; n must be 2 or 4.
const EdgeRule& edge_gauss(int n);

}  // namespace dpgls
