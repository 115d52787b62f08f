#include "dpgls/dofmap.hpp"

#include <stdexcept>

namespace dpgls {

TrialDofMap build_trial_dofmap(
    const Mesh& mesh, const std::function<bool(int, const Vec2&)>& dirichlet_vertex) {
  if (!dirichlet_vertex)
    throw std::invalid_argument("build_trial_dofmap: empty Dirichlet predicate");
  TrialDofMap map;
  map.vertex_dof.assign(mesh.num_vertices(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.vertex_on_boundary(v) && dirichlet_vertex(v, mesh.vertex(v)))
      map.dirichlet_vertices.push_back(v);
    else
      map.vertex_dof[v] = map.n_free_u++;
  }
  map.n_facets = mesh.num_facets();
  map.n_triangles = mesh.num_triangles();
  return map;
}

std::function<bool(int, const Vec2&)> all_boundary_dirichlet() {
  return [](int, const Vec2&) { return true; };
}

DiscreteSolution DiscreteSolution::zeros(const Mesh& mesh) {
  DiscreteSolution s;
  s.u = Eigen::VectorXd::Zero(mesh.num_vertices());
  s.sigma = Eigen::VectorXd::Zero(mesh.num_facets());
  s.q = Eigen::VectorXd::Zero(mesh.num_triangles());
  s.r = Eigen::VectorXd::Zero(mesh.num_triangles());
  return s;
}

Eigen::VectorXd DiscreteSolution::free_vector(const TrialDofMap& map) const {
  Eigen::VectorXd x(map.total());
  for (std::size_t v = 0; v < map.vertex_dof.size(); ++v)
    if (map.vertex_dof[v] >= 0) x[map.vertex_dof[v]] = u[v];
  for (int f = 0; f < map.n_facets; ++f) x[map.sigma_dof(f)] = sigma[f];
  for (int t = 0; t < map.n_triangles; ++t) {
    x[map.q_dof(t)] = q[t];
    x[map.r_dof(t)] = r[t];
  }
  return x;
}

void DiscreteSolution::set_free_vector(const TrialDofMap& map,
                                       const Eigen::VectorXd& x) {
  if (x.size() != map.total())
    throw std::invalid_argument("set_free_vector: size mismatch");
  for (std::size_t v = 0; v < map.vertex_dof.size(); ++v)
    if (map.vertex_dof[v] >= 0) u[v] = x[map.vertex_dof[v]];
  for (int f = 0; f < map.n_facets; ++f) sigma[f] = x[map.sigma_dof(f)];
  for (int t = 0; t < map.n_triangles; ++t) {
    q[t] = x[map.q_dof(t)];
    r[t] = x[map.r_dof(t)];
  }
}

}  // namespace dpgls
