#pragma once

// Conforming triangle meshes with newest-vertex bisection.
//
// Conventions used throughout:
//  * triangles are counterclockwise; local vertex 0 is the newest vertex and
//    the refinement edge is the edge opposite to it,
//  * local facet i of a triangle is the edge opposite local vertex i
//    (so local facet 0 is the refinement edge),
//  * facets are stored as vertex pairs (a,b) with a < b and numbered in
//    lexicographic order of those pairs, which makes facet ids independent
//    of element traversal order,
//  * the canonical facet normal is the direction from the lower to the higher
//    vertex id rotated by -90 degrees, i.e. (x,y) -> (y,-x); facet_sign tells
//    whether that normal points out of a given incident triangle.

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace dpgls {

using Vec2 = Eigen::Vector2d;

/// Set of triangle indices selected for refinement.
using MarkSet = std::vector<int>;

class Mesh {
public:
  /// Tag for constructing from triangles whose vertex order already encodes
  /// the bisection hierarchy (used by bisect(); skips refinement-edge setup).
  struct KeepOrdering {};

  /// Builds a mesh from raw connectivity.  Triangles are reordered so that
  /// they are counterclockwise and the refinement edge (opposite local
  /// vertex 0) is the longest edge, ties broken towards the smaller facet id.
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       KeepOrdering);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  /// Vertex pair (a,b) of a facet, a < b.
  const std::array<int, 2>& facet_vertices(int f) const { return facets_[f]; }
  /// Global id of local facet i (the edge opposite local vertex i).
  int facet(int t, int i) const { return tri_facets_[t][i]; }
  /// +1 if the canonical facet normal points out of triangle t, else -1.
  int facet_sign(int t, int i) const { return tri_facet_signs_[t][i]; }
  /// Incident triangles of a facet; second entry is -1 on the boundary.
  const std::array<int, 2>& facet_triangles(int f) const {
    return facet_tris_[f];
  }

  bool facet_on_boundary(int f) const { return facet_tris_[f][1] < 0; }
  bool vertex_on_boundary(int v) const { return vertex_boundary_[v] != 0; }

  double area(int t) const;
  double total_area() const;
  /// Length of local facet i of triangle t.
  double facet_length(int t, int i) const;

  /// Index of the triangle this one was created from by bisect(), or -1 for
  /// triangles of an initial mesh.
  int parent(int t) const { return parents_[t]; }

  /// Checks conformity: positive areas, each facet incident to one or two
  /// triangles (with opposite orientations if two), no hanging vertices,
  /// Euler characteristic of a disk.  Throws std::runtime_error on failure.
  void validate() const;

private:
  void build_topology();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> facets_;        // sorted vertex pairs
  std::vector<std::array<int, 3>> tri_facets_;    // facet id per local facet
  std::vector<std::array<int, 3>> tri_facet_signs_;
  std::vector<std::array<int, 2>> facet_tris_;
  std::vector<char> vertex_boundary_;
  std::vector<int> parents_;

  friend Mesh bisect(const Mesh&, const MarkSet&);
};

/// n x n grid of squares on (0,1)^2, each split along the diagonal from the
/// lower-left to the upper-right corner.  Requires n >= 1.
Mesh build_unit_square(int n);

/// L-shaped domain (-1,1)^2 minus the closed quadrant [0,1) x (-1,0], meshed
/// as three unit squares each refined as in build_unit_square(n).  The
/// reentrant corner at the origin is always a mesh vertex.  Requires n >= 1.
Mesh build_lshape(int n);

/// Newest-vertex bisection.  Every marked triangle is bisected at least once
/// (at its refinement edge); further triangles are refined as needed so the
/// result is conforming.  A triangle whose three edges end up marked is split
/// into four, one with two marked edges into three.  Marked indices must be
/// valid; an empty mark set returns the input mesh unchanged.
Mesh bisect(const Mesh& mesh, const MarkSet& marked);

/// Plain-text dump: "vertices <nv> triangles <nt>" followed by one "x y" line
/// per vertex (17 significant digits) and one "v0 v1 v2" line per triangle.
void write_mesh_dump(const Mesh& mesh, std::ostream& out);

/// Inverse of write_mesh_dump.  Refinement edges are re-derived by the
/// longest-edge rule, so the bisection hierarchy is not preserved.
Mesh read_mesh_dump(std::istream& in);

}  // namespace dpgls
