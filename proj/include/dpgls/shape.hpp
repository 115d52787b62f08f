#pragma once

// Per-element geometry and the local bases of the method:
//  * trial side: vertex hat functions (= barycentric coordinates), facet
//    indicator constants carrying the orientation sign, and the two element
//    constants,
//  * broken test side: the three barycentric coordinates plus the cubic
//    element bubble 27*l0*l1*l2 (value 1 at the centroid).

#include <array>

#include "dpgls/mesh.hpp"

namespace dpgls {

struct ElementGeometry {
  std::array<Vec2, 3> v;               // vertex coordinates, local order
  double area = 0.0;                   // positive
  std::array<Vec2, 3> grad_lambda;     // gradients of barycentric coordinates
  std::array<double, 3> edge_length;   // local facet i (opposite vertex i)

  Vec2 point(const std::array<double, 3>& bary) const {
    return bary[0] * v[0] + bary[1] * v[1] + bary[2] * v[2];
  }

  static ElementGeometry from(const Mesh& mesh, int t);
  static ElementGeometry from_vertices(const std::array<Vec2, 3>& v);
};

/// Dimension of the local test space P1 + bubble.
inline constexpr int kTestDim = 4;

/// Values of the four test functions at a barycentric point.
std::array<double, kTestDim> test_values(const std::array<double, 3>& bary);

/// Gradients of the four test functions at a barycentric point.
std::array<Vec2, kTestDim> test_gradients(const ElementGeometry& g,
                                          const std::array<double, 3>& bary);

/// Values of the trial basis restricted to one element at a barycentric
/// point.  Facet entries hold the orientation sign the facet constant
/// carries when paired against tests from this element (the facet basis
/// function itself is 1 on the facet in canonical orientation).
struct TrialValues {
  std::array<double, 3> hat;        // vertex hats = barycentric coordinates
  std::array<Vec2, 3> hat_grad;     // constant on the element
  std::array<double, 3> facet_sign; // per local facet
  double element_const = 1.0;       // basis for both element-constant fields
};

TrialValues eval_trial(const Mesh& mesh, int t, const std::array<double, 3>& bary);

}  // namespace dpgls
