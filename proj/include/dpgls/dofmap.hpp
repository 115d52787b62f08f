#pragma once

// Degrees of freedom of the trial space
//   P1(T) cap H1 (vertex values, Dirichlet vertices eliminated)
//   x P0(facets)  (one value per facet, canonical orientation)
//   x P0(T) x P0(T)  (element constants q and r).
// Free dofs are blocked as [u | sigma | q | r] with ascending ids inside each
// block following vertex/facet/triangle numbering.

#include <functional>

#include <Eigen/Core>

#include "dpgls/mesh.hpp"

namespace dpgls {

struct TrialDofMap {
  std::vector<int> vertex_dof;  // free dof id per vertex, -1 where Dirichlet
  std::vector<int> dirichlet_vertices;
  int n_free_u = 0;
  int n_facets = 0;
  int n_triangles = 0;

  int total() const { return n_free_u + n_facets + 2 * n_triangles; }
  int sigma_dof(int facet) const { return n_free_u + facet; }
  int q_dof(int t) const { return n_free_u + n_facets + t; }
  int r_dof(int t) const { return n_free_u + n_facets + n_triangles + t; }
};

/// The predicate is evaluated at boundary vertices only; interior vertices
/// are always free.  Returning true pins the vertex to the Dirichlet datum.
TrialDofMap build_trial_dofmap(
    const Mesh& mesh,
    const std::function<bool(int, const Vec2&)>& dirichlet_vertex);

/// Convenience predicate: the whole boundary is Dirichlet.
std::function<bool(int, const Vec2&)> all_boundary_dirichlet();

/// Coefficients of a trial function, stored per entity (u also carries the
/// Dirichlet vertex values, so it has one entry per mesh vertex).
struct DiscreteSolution {
  Eigen::VectorXd u;      // per vertex
  Eigen::VectorXd sigma;  // per facet
  Eigen::VectorXd q;      // per triangle
  Eigen::VectorXd r;      // per triangle

  static DiscreteSolution zeros(const Mesh& mesh);

  /// Gathers the free dofs into one vector ordered like TrialDofMap.
  Eigen::VectorXd free_vector(const TrialDofMap& map) const;
  /// Scatters a free-dof vector back; Dirichlet slots keep their values.
  void set_free_vector(const TrialDofMap& map, const Eigen::VectorXd& x);
};

}  // namespace dpgls
