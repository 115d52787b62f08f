#include "dpgls/shape.hpp"

#include <stdexcept>
#include <string>

namespace dpgls {

ElementGeometry ElementGeometry::from_vertices(const std::array<Vec2, 3>& v) {
  ElementGeometry g;
  g.v = v;
  const Vec2 e0 = v[2] - v[1];  // edge opposite vertex 0, and so on
  const Vec2 e1 = v[0] - v[2];
  const Vec2 e2 = v[1] - v[0];
  const double twice_area = e2.x() * (-e1.y()) - e2.y() * (-e1.x());
  if (!(twice_area > 0.0))
    throw std::runtime_error("ElementGeometry: clockwise or degenerate triangle");
  g.area = 0.5 * twice_area;
  // grad lambda_i is the inward normal of edge i scaled by 1/(2*area);
  // rotating the CCW edge vector by +90 degrees points into the triangle.
  const auto rot = [](const Vec2& e) { return Vec2(-e.y(), e.x()); };
  g.grad_lambda = {rot(e0) / twice_area, rot(e1) / twice_area,
                   rot(e2) / twice_area};
  g.edge_length = {e0.norm(), e1.norm(), e2.norm()};
  return g;
}

ElementGeometry ElementGeometry::from(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  return from_vertices({mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])});
}

std::array<double, kTestDim> test_values(const std::array<double, 3>& b) {
  return {b[0], b[1], b[2], 27.0 * b[0] * b[1] * b[2]};
}

std::array<Vec2, kTestDim> test_gradients(const ElementGeometry& g,
                                          const std::array<double, 3>& b) {
  return {g.grad_lambda[0], g.grad_lambda[1], g.grad_lambda[2],
          27.0 * (b[1] * b[2] * g.grad_lambda[0] + b[0] * b[2] * g.grad_lambda[1] +
                  b[0] * b[1] * g.grad_lambda[2])};
}

TrialValues eval_trial(const Mesh& mesh, int t, const std::array<double, 3>& b) {
  const ElementGeometry g = ElementGeometry::from(mesh, t);
  TrialValues tv;
  tv.hat = {b[0], b[1], b[2]};
  tv.hat_grad = g.grad_lambda;
  for (int i = 0; i < 3; ++i)
    tv.facet_sign[i] = static_cast<double>(mesh.facet_sign(t, i));
  tv.element_const = 1.0;
  return tv;
}

}  // namespace dpgls
