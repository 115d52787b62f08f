#include "dpgls/local_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

#include "dpgls/quadrature.hpp"

namespace dpgls {

LocalGram local_gram(const ElementGeometry& g) {
  const QuadRule& rule = triangle_quadrature(TriangleRule::assembly_12pt);
  LocalGram m = LocalGram::Zero();
  for (int k = 0; k < rule.size(); ++k) {
    const double w = 2.0 * g.area * rule.weights[k];
    const auto val = test_values(rule.points[k]);
    const auto grad = test_gradients(g, rule.points[k]);
    for (int i = 0; i < kTestDim; ++i)
      for (int j = 0; j <= i; ++j)
        m(i, j) += w * (val[i] * val[j] + grad[i].dot(grad[j]));
  }
  m = m.selfadjointView<Eigen::Lower>();
  return m;
}

LocalB local_B(const Mesh& mesh, int t, const ProblemSpec& problem) {
  const ElementGeometry g = ElementGeometry::from(mesh, t);
  LocalB b = LocalB::Zero();

  // Volume terms with the degree-6 rule: (kappa grad u + q beta) . grad v
  // and r v.  Hat gradients are constant but kappa may vary.
  const QuadRule& vol = triangle_quadrature(TriangleRule::assembly_12pt);
  for (int k = 0; k < vol.size(); ++k) {
    const double w = 2.0 * g.area * vol.weights[k];
    const Vec2 x = g.point(vol.points[k]);
    const Eigen::Matrix2d kappa = problem.kappa_at(x);
    if (std::abs(kappa(0, 1) - kappa(1, 0)) >
            1e-12 * (1.0 + kappa.cwiseAbs().maxCoeff()) ||
        kappa(0, 0) <= 0.0 || kappa.determinant() <= 0.0)
      throw std::runtime_error("local_B: kappa sample is not SPD on element " +
                               std::to_string(t));
    const auto val = test_values(vol.points[k]);
    const auto grad = test_gradients(g, vol.points[k]);
    for (int i = 0; i < kTestDim; ++i) {
      for (int j = 0; j < 3; ++j)
        b(i, j) += w * (kappa * g.grad_lambda[j]).dot(grad[i]);
      b(i, 6) += w * problem.beta.dot(grad[i]);
      b(i, 7) += w * val[i];
    }
  }

  // Facet terms -sign(T,F) int_F v for the facet constants.  Edge points are
  // written in barycentric coordinates, so the bubble vanishes exactly.
  const EdgeRule& edge = edge_gauss(4);
  for (int e = 0; e < 3; ++e) {
    const double scale =
        -static_cast<double>(mesh.facet_sign(t, e)) * g.edge_length[e];
    for (int k = 0; k < edge.size(); ++k) {
      std::array<double, 3> bary{0.0, 0.0, 0.0};
      bary[(e + 1) % 3] = 1.0 - edge.points[k];
      bary[(e + 2) % 3] = edge.points[k];
      const auto val = test_values(bary);
      for (int i = 0; i < kTestDim; ++i)
        b(i, 3 + e) += scale * edge.weights[k] * val[i];
    }
  }
  return b;
}

LocalLoad local_load(const ElementGeometry& g, const ScalarField& f) {
  const QuadRule& rule = triangle_quadrature(TriangleRule::residual_7pt);
  LocalLoad l = LocalLoad::Zero();
  for (int k = 0; k < rule.size(); ++k) {
    const double wf = 2.0 * g.area * rule.weights[k] * f(g.point(rule.points[k]));
    const auto val = test_values(rule.points[k]);
    for (int i = 0; i < kTestDim; ++i) l[i] += wf * val[i];
  }
  return l;
}

LocalSystem build_local_system(const Mesh& mesh, const TrialDofMap& map,
                               const ProblemSpec& problem, int t) {
  LocalSystem ls;
  ls.element = t;
  ls.vertices = mesh.triangle(t);
  const ElementGeometry g = ElementGeometry::from(mesh, t);
  ls.gram = local_gram(g);
  ls.gram_llt.compute(ls.gram);
  if (ls.gram_llt.info() != Eigen::Success)
    throw std::runtime_error("build_local_system: Gram matrix of element " +
                             std::to_string(t) + " is not positive definite");
  ls.b = local_B(mesh, t, problem);
  ls.load = local_load(g, problem.f);
  for (int i = 0; i < 3; ++i) {
    ls.column_dof[i] = map.vertex_dof[ls.vertices[i]];
    ls.column_dof[3 + i] = map.sigma_dof(mesh.facet(t, i));
  }
  ls.column_dof[6] = map.q_dof(t);
  ls.column_dof[7] = map.r_dof(t);
  return ls;
}

Eigen::Matrix<double, kLocalTrial, 1> LocalSystem::gather(
    const Mesh& mesh, const DiscreteSolution& x) const {
  Eigen::Matrix<double, kLocalTrial, 1> v;
  for (int i = 0; i < 3; ++i) {
    v[i] = x.u[vertices[i]];
    v[3 + i] = x.sigma[mesh.facet(element, i)];
  }
  v[6] = x.q[element];
  v[7] = x.r[element];
  return v;
}

}  // namespace dpgls
