#include "dpgls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpgls {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (b.y() - a.y()) * (c.x() - a.x()));
}

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           KeepOrdering)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  parents_.assign(triangles_.size(), -1);
  build_topology();
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  for (auto& tri : triangles_) {
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("Mesh: triangle vertex id out of range");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw std::invalid_argument("Mesh: degenerate triangle (repeated vertex)");
    // Counterclockwise orientation; swapping the last two vertices keeps the
    // vertex opposite the refinement edge in local slot 0.
    if (signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) < 0.0)
      std::swap(tri[1], tri[2]);
    // Rotate so the edge opposite local vertex 0 is the longest one; on ties
    // prefer the edge with the lexicographically smaller vertex pair, which is
    // the one with the smaller global facet id.
    int best = 0;
    double best_len = -1.0;
    std::array<int, 2> best_pair{-1, -1};
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3], b = tri[(i + 2) % 3];
      const double len = (vertices_[a] - vertices_[b]).squaredNorm();
      const auto pair = sorted_pair(a, b);
      if (len > best_len || (len == best_len && pair < best_pair)) {
        best = i;
        best_len = len;
        best_pair = pair;
      }
    }
    tri = {tri[best], tri[(best + 1) % 3], tri[(best + 2) % 3]};
  }
  parents_.assign(triangles_.size(), -1);
  build_topology();
}

void Mesh::build_topology() {
  const int nt = num_triangles();
  // Deterministic facet numbering: sorted vertex pairs in lexicographic order.
  std::map<std::array<int, 2>, int> facet_id;
  for (const auto& tri : triangles_)
    for (int i = 0; i < 3; ++i)
      facet_id.emplace(sorted_pair(tri[(i + 1) % 3], tri[(i + 2) % 3]), 0);
  facets_.clear();
  facets_.reserve(facet_id.size());
  for (auto& [pair, id] : facet_id) {
    id = static_cast<int>(facets_.size());
    facets_.push_back(pair);
  }

  tri_facets_.assign(nt, {-1, -1, -1});
  tri_facet_signs_.assign(nt, {0, 0, 0});
  facet_tris_.assign(facets_.size(), {-1, -1});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3], b = tri[(i + 2) % 3];
      const int f = facet_id.at(sorted_pair(a, b));
      tri_facets_[t][i] = f;
      // Counterclockwise traversal of t passes this edge as a -> b; the
      // canonical normal belongs to the low -> high direction.
      tri_facet_signs_[t][i] = a < b ? 1 : -1;
      auto& inc = facet_tris_[f];
      if (inc[0] < 0)
        inc[0] = t;
      else if (inc[1] < 0)
        inc[1] = t;
      else
        throw std::runtime_error("Mesh: facet shared by more than two triangles");
    }
  }

  vertex_boundary_.assign(vertices_.size(), 0);
  for (std::size_t f = 0; f < facets_.size(); ++f)
    if (facet_tris_[f][1] < 0) {
      vertex_boundary_[facets_[f][0]] = 1;
      vertex_boundary_[facets_[f][1]] = 1;
    }
}

double Mesh::area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += area(t);
  return sum;
}

double Mesh::facet_length(int t, int i) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[(i + 1) % 3]] - vertices_[tri[(i + 2) % 3]]).norm();
}

void Mesh::validate() const {
  for (int t = 0; t < num_triangles(); ++t)
    if (!(area(t) > 0.0))
      throw std::runtime_error("Mesh: triangle " + std::to_string(t) +
                               " is degenerate or clockwise");

  for (int f = 0; f < num_facets(); ++f) {
    const auto [t0, t1] = facet_tris_[f];
    if (t0 < 0)
      throw std::runtime_error("Mesh: facet " + std::to_string(f) +
                               " has no incident triangle");
    if (t1 >= 0) {
      // The two incident triangles must traverse the shared edge in opposite
      // directions, i.e. carry opposite signs.
      int s0 = 0, s1 = 0;
      for (int i = 0; i < 3; ++i) {
        if (tri_facets_[t0][i] == f) s0 = tri_facet_signs_[t0][i];
        if (tri_facets_[t1][i] == f) s1 = tri_facet_signs_[t1][i];
      }
      if (s0 * s1 != -1)
        throw std::runtime_error("Mesh: inconsistent orientation across facet " +
                                 std::to_string(f));
    } else {
      // A hanging vertex sits at the midpoint of a once-refined neighbour
      // edge; on a conforming mesh no facet midpoint is itself a vertex.
      // (Interior hanging vertices already violate the two-triangle rule, so
      // checking boundary facets suffices together with the Euler count.)
      const Vec2 mid = 0.5 * (vertices_[facets_[f][0]] + vertices_[facets_[f][1]]);
      for (int v = 0; v < num_vertices(); ++v)
        if (vertices_[v].x() == mid.x() && vertices_[v].y() == mid.y())
          throw std::runtime_error("Mesh: hanging vertex " + std::to_string(v) +
                                   " on boundary facet " + std::to_string(f));
    }
  }

  // Euler characteristic of a triangulated disk: V - E + T = 1.
  if (num_vertices() - num_facets() + num_triangles() != 1)
    throw std::runtime_error("Mesh: Euler characteristic is not 1");
}

Mesh build_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(i * h, j * h);

  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Diagonal from the lower-left to the upper-right corner; both halves
      // get the diagonal as refinement edge (it is the longest edge).
      triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j)});
      triangles.push_back({id(i, j + 1), id(i, j), id(i + 1, j + 1)});
    }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh build_lshape(int n) {
  if (n < 1) throw std::invalid_argument("build_lshape: n must be >= 1");
  // Vertices of the grid on (-1,1)^2 with the lower-right square excluded.
  // Grid indices (i,j) in [0,2n]^2 map to coordinates (i/n - 1, j/n - 1);
  // points with x > 0 and y < 0 are skipped.
  std::vector<Vec2> vertices;
  std::vector<int> gid((2 * n + 1) * (2 * n + 1), -1);
  const double h = 1.0 / n;
  for (int j = 0; j <= 2 * n; ++j)
    for (int i = 0; i <= 2 * n; ++i) {
      if (i > n && j < n) continue;
      gid[j * (2 * n + 1) + i] = static_cast<int>(vertices.size());
      vertices.emplace_back(i * h - 1.0, j * h - 1.0);
    }

  auto id = [&](int i, int j) { return gid[j * (2 * n + 1) + i]; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(6 * n * n);
  for (int j = 0; j < 2 * n; ++j)
    for (int i = 0; i < 2 * n; ++i) {
      if (i >= n && j < n) continue;  // excluded quadrant
      triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j)});
      triangles.push_back({id(i, j + 1), id(i, j), id(i + 1, j + 1)});
    }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh bisect(const Mesh& mesh, const MarkSet& marked) {
  if (marked.empty()) return mesh;
  const int nt = mesh.num_triangles();
  std::vector<char> edge_marked(mesh.num_facets(), 0);
  for (int t : marked) {
    if (t < 0 || t >= nt)
      throw std::invalid_argument("bisect: marked triangle index out of range");
    edge_marked[mesh.facet(t, 0)] = 1;
  }

  // Closure: whenever any edge of a triangle is marked, its refinement edge
  // must be marked too, so that hanging vertices are split away.
  for (bool changed = true; changed;) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      if (edge_marked[mesh.facet(t, 0)]) continue;
      if (edge_marked[mesh.facet(t, 1)] || edge_marked[mesh.facet(t, 2)]) {
        edge_marked[mesh.facet(t, 0)] = 1;
        changed = true;
      }
    }
  }

  // One new vertex per marked edge, numbered in facet order.
  std::vector<Vec2> vertices(mesh.vertices_);
  std::vector<int> midpoint(mesh.num_facets(), -1);
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (edge_marked[f]) {
      midpoint[f] = static_cast<int>(vertices.size());
      const auto [a, b] = mesh.facet_vertices(f);
      vertices.push_back(0.5 * (mesh.vertex(a) + mesh.vertex(b)));
    }

  // Children of (v0,v1,v2) bisected at the midpoint m of its refinement edge
  // (v1,v2) are (m,v0,v1) and (m,v2,v0); both are counterclockwise again and
  // have m as newest vertex.  Children inherit at most one further marked
  // edge each and are bisected once more in that case.
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> parents;
  triangles.reserve(2 * nt);
  auto emit = [&](int v0, int v1, int v2, int parent) {
    triangles.push_back({v0, v1, v2});
    parents.push_back(parent);
  };
  for (int t = 0; t < nt; ++t) {
    const auto [v0, v1, v2] = mesh.triangle(t);
    const int m0 = midpoint[mesh.facet(t, 0)];
    const int m1 = midpoint[mesh.facet(t, 1)];
    const int m2 = midpoint[mesh.facet(t, 2)];
    if (m0 < 0) {
      emit(v0, v1, v2, t);
      continue;
    }
    if (m2 >= 0) {  // parent edge (v0,v1), refinement edge of child (m0,v0,v1)
      emit(m2, m0, v0, t);
      emit(m2, v1, m0, t);
    } else {
      emit(m0, v0, v1, t);
    }
    if (m1 >= 0) {  // parent edge (v2,v0), refinement edge of child (m0,v2,v0)
      emit(m1, m0, v2, t);
      emit(m1, v0, m0, t);
    } else {
      emit(m0, v2, v0, t);
    }
  }

  Mesh refined(std::move(vertices), std::move(triangles), Mesh::KeepOrdering{});
  refined.parents_ = std::move(parents);
  return refined;
}

void write_mesh_dump(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.num_vertices() << " triangles "
      << mesh.num_triangles() << "\n";
  char buf[64];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", mesh.vertex(v).x(),
                  mesh.vertex(v).y());
    out << buf << "\n";
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    out << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  if (!out) throw std::runtime_error("write_mesh_dump: write failed");
}

Mesh read_mesh_dump(std::istream& in) {
  std::string kw_v, kw_t;
  int nv = 0, nt = 0;
  in >> kw_v >> nv >> kw_t >> nt;
  if (!in || kw_v != "vertices" || kw_t != "triangles" || nv < 3 || nt < 1)
    throw std::runtime_error("read_mesh_dump: malformed header");
  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) in >> v.x() >> v.y();
  std::vector<std::array<int, 3>> triangles(nt);
  for (auto& tri : triangles) in >> tri[0] >> tri[1] >> tri[2];
  if (!in) throw std::runtime_error("read_mesh_dump: truncated data");
  return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace dpgls
