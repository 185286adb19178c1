#pragma once

// Combinatorial deltahedron (a, b): the closed triangulated surface obtained
// as the quotient of the unit triangular grid by the tiling group.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geofold/lattice.hpp"

namespace geofold {

using FaceId = std::int32_t;
using VertexId = std::int32_t;
using HalfEdgeId = std::int32_t;

/// Half-edge 3f+i runs from corner i to corner i+1 of face f.
struct HalfEdge {
  VertexId origin = -1;
  HalfEdgeId twin = -1;
};

inline Int face_count(Int a, Int b) { return s_value(a, b); }

/// Thrown when a construction produces something that is not a closed
/// oriented 2-manifold.
struct ManifoldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeltaMesh {
  Int a = 0;
  Int b = 0;
  std::vector<std::array<VertexId, 3>> faces;
  std::vector<HalfEdge> half_edges;
  /// One outgoing half-edge per vertex.
  std::vector<HalfEdgeId> vertex_half_edge;
  /// Lattice representative of each face; its corners correspond to the
  /// face's vertices in order.
  std::vector<LatticeTriangle> face_lattice_rep;
  /// Lattice representative of each vertex.
  std::vector<GridCoord> vertex_lattice_rep;

  std::size_t face_count() const { return faces.size(); }
  std::size_t vertex_count() const { return vertex_half_edge.size(); }
  std::size_t edge_count() const { return half_edges.size() / 2; }

  static constexpr HalfEdgeId next(HalfEdgeId h) { return h - h % 3 + (h % 3 + 1) % 3; }
  static constexpr HalfEdgeId prev(HalfEdgeId h) { return h - h % 3 + (h % 3 + 2) % 3; }
  static constexpr FaceId face_of(HalfEdgeId h) { return h / 3; }

  VertexId origin(HalfEdgeId h) const { return half_edges[h].origin; }
  VertexId target(HalfEdgeId h) const { return half_edges[next(h)].origin; }
  HalfEdgeId twin(HalfEdgeId h) const { return half_edges[h].twin; }

  /// Outgoing half-edges around v in counterclockwise order seen from outside.
  std::vector<HalfEdgeId> outgoing(VertexId v) const {
    std::vector<HalfEdgeId> out;
    const HalfEdgeId start = vertex_half_edge[v];
    HalfEdgeId h = start;
    do {
      out.push_back(h);
      h = twin(prev(h));
      if (out.size() > half_edges.size()) throw ManifoldError("vertex fan does not close");
    } while (h != start);
    return out;
  }

  /// Neighbor vertices around v in counterclockwise order seen from outside.
  std::vector<VertexId> ring(VertexId v) const {
    std::vector<VertexId> r;
    for (HalfEdgeId h : outgoing(v)) r.push_back(target(h));
    return r;
  }

  std::size_t degree(VertexId v) const { return outgoing(v).size(); }

  /// Each undirected edge once, as (origin, target) of its lower half-edge.
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> e;
    e.reserve(edge_count());
    for (HalfEdgeId h = 0; h < static_cast<HalfEdgeId>(half_edges.size()); ++h) {
      if (h < twin(h)) e.emplace_back(origin(h), target(h));
    }
    return e;
  }
};

/// Throws ManifoldError unless m is a closed oriented triangulated 2-manifold
/// with consistent half-edge structure.
inline void validate(const DeltaMesh& m) {
  const auto nh = static_cast<HalfEdgeId>(m.half_edges.size());
  if (nh != static_cast<HalfEdgeId>(3 * m.faces.size())) throw ManifoldError("half-edge count mismatch");
  for (HalfEdgeId h = 0; h < nh; ++h) {
    const HalfEdgeId t = m.twin(h);
    if (t < 0 || t >= nh || t == h) throw ManifoldError("half-edge without twin");
    if (m.twin(t) != h) throw ManifoldError("twin is not an involution");
    if (m.origin(t) != m.target(h) || m.target(t) != m.origin(h)) {
      throw ManifoldError("twin half-edges do not run in opposite directions");
    }
    if (DeltaMesh::face_of(t) == DeltaMesh::face_of(h)) throw ManifoldError("face glued to itself");
    const auto& f = m.faces[DeltaMesh::face_of(h)];
    if (m.origin(h) != f[h % 3]) throw ManifoldError("half-edge origin disagrees with face");
  }
  // Every half-edge belongs to exactly one vertex fan.
  std::vector<char> seen(nh, 0);
  std::size_t total = 0;
  for (VertexId v = 0; v < static_cast<VertexId>(m.vertex_count()); ++v) {
    for (HalfEdgeId h : m.outgoing(v)) {
      if (m.origin(h) != v || seen[h]) throw ManifoldError("vertex is not a single disk fan");
      seen[h] = 1;
      ++total;
    }
    if (m.degree(v) < 3) throw ManifoldError("vertex of degree < 3");
  }
  if (total != static_cast<std::size_t>(nh)) throw ManifoldError("half-edges not covered by fans");
}

namespace detail {

// Assembles the half-edge table from faces and a per-half-edge twin list.
inline void assemble(DeltaMesh& m, const std::vector<HalfEdgeId>& twins, std::size_t vertex_count) {
  m.half_edges.assign(3 * m.faces.size(), {});
  m.vertex_half_edge.assign(vertex_count, -1);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    for (int i = 0; i < 3; ++i) {
      const auto h = static_cast<HalfEdgeId>(3 * f + i);
      m.half_edges[h] = {m.faces[f][i], twins[h]};
      auto& vh = m.vertex_half_edge[m.faces[f][i]];
      if (vh < 0) vh = h;
    }
  }
  if (std::find(m.vertex_half_edge.begin(), m.vertex_half_edge.end(), -1) != m.vertex_half_edge.end()) {
    throw ManifoldError("isolated vertex");
  }
  validate(m);
}

}  // namespace detail

/// Builds deltahedron (a, b) as the quotient of the grid by tiling_group(a, b).
/// Faces are numbered in (q, p, orient) order of their canonical triangles,
/// vertices in (q, p) order of their canonical points. Up triangles map to
/// counterclockwise faces.
inline DeltaMesh build_mesh(Int a, Int b) {
  const TilingGroup g(a, b);
  DeltaMesh m;
  m.a = a;
  m.b = b;

  std::vector<LatticeTriangle> reps;
  for (Int q = 0; q < g.cell_height(); ++q) {
    for (Int p = 0; p < g.cell_width(); ++p) {
      for (Orient o : {Orient::Up, Orient::Down}) {
        const LatticeTriangle t{{p, q}, o};
        if (g.canonical_triangle(t).rep == t) reps.push_back(t);
      }
    }
  }
  // Cell scan is already in (q, p, orient) order.
  if (static_cast<Int>(reps.size()) != g.determinant()) {
    throw ManifoldError("orbit count differs from S(a, b)");
  }

  std::vector<GridCoord> vreps;
  for (const auto& t : reps) {
    for (const GridCoord& c : t.corners()) vreps.push_back(g.canonical_point(c).rep);
  }
  std::sort(vreps.begin(), vreps.end());
  vreps.erase(std::unique(vreps.begin(), vreps.end()), vreps.end());

  auto face_id = [&](const LatticeTriangle& rep) {
    const auto it = std::lower_bound(reps.begin(), reps.end(), rep);
    if (it == reps.end() || *it != rep) throw ManifoldError("triangle is not a face representative");
    return static_cast<FaceId>(it - reps.begin());
  };
  auto vertex_id = [&](GridCoord c) {
    const GridCoord rep = g.canonical_point(c).rep;
    return static_cast<VertexId>(std::lower_bound(vreps.begin(), vreps.end(), rep) - vreps.begin());
  };

  m.face_lattice_rep = reps;
  m.vertex_lattice_rep = vreps;
  m.faces.resize(reps.size());
  std::vector<HalfEdgeId> twins(3 * reps.size(), -1);
  for (std::size_t f = 0; f < reps.size(); ++f) {
    const auto cs = reps[f].corners();
    for (int i = 0; i < 3; ++i) {
      m.faces[f][i] = vertex_id(cs[i]);
      // Neighbor across edge (A, B) is the triangle A, B, A + B - C.
      const GridCoord A = cs[i], B = cs[(i + 1) % 3], C = cs[(i + 2) % 3];
      const LatticeTriangle nb = triangle_from_corners(A, B, A + B - C);
      const auto canon = g.canonical_triangle(nb);
      const GridCoord gA = canon.to_rep(A), gB = canon.to_rep(B);
      const auto ncs = canon.rep.corners();
      const FaceId nf = face_id(canon.rep);
      for (int j = 0; j < 3; ++j) {
        if (ncs[j] == gB && ncs[(j + 1) % 3] == gA) twins[3 * f + i] = static_cast<HalfEdgeId>(3 * nf + j);
      }
      if (twins[3 * f + i] < 0) throw ManifoldError("neighbor edge not found in representative");
    }
  }
  detail::assemble(m, twins, vreps.size());
  return m;
}

/// Orientation-reversed copy. Lattice representatives are reflected across
/// the ex = ey diagonal, so the result describes deltahedron (b, a).
inline DeltaMesh mirror_mesh(const DeltaMesh& m) {
  DeltaMesh r;
  r.a = m.b;
  r.b = m.a;
  r.vertex_lattice_rep.reserve(m.vertex_lattice_rep.size());
  for (const GridCoord& c : m.vertex_lattice_rep) r.vertex_lattice_rep.push_back({c.q, c.p});
  r.faces.resize(m.faces.size());
  r.face_lattice_rep.resize(m.faces.size());

  // new corner k of face f comes from old corner perm[f][k]
  std::vector<std::array<int, 3>> perm(m.faces.size());
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    const auto cs = m.face_lattice_rep[f].corners();
    std::array<GridCoord, 3> refl{};
    for (int i = 0; i < 3; ++i) refl[i] = {cs[i].q, cs[i].p};
    const LatticeTriangle t = triangle_from_corners(refl[0], refl[1], refl[2]);
    r.face_lattice_rep[f] = t;
    const auto ncs = t.corners();
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        if (refl[i] == ncs[k]) perm[f][k] = i;
      }
      r.faces[f][k] = m.faces[f][perm[f][k]];
    }
  }
  // New half-edge (f, k) runs from old corner perm[k] to perm[k+1]; it is the
  // reverse of an old half-edge, whose twin's reverse is the new twin.
  auto old_corner_to_new = [&](FaceId f, int old_i) {
    for (int k = 0; k < 3; ++k) {
      if (perm[f][k] == old_i) return k;
    }
    throw ManifoldError("corner permutation is not a bijection");
  };
  std::vector<HalfEdgeId> twins(3 * m.faces.size(), -1);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int from = perm[f][k], to = perm[f][(k + 1) % 3];
      if ((from + 1) % 3 != to) {
        // Old half-edge to -> from.
        const HalfEdgeId old_h = static_cast<HalfEdgeId>(3 * f + to);
        const HalfEdgeId old_t = m.twin(old_h);
        const FaceId tf = DeltaMesh::face_of(old_t);
        // Reversed old_t starts at old corner (i+1) of tf.
        const int k2 = old_corner_to_new(tf, (old_t % 3 + 1) % 3);
        twins[3 * f + k] = static_cast<HalfEdgeId>(3 * tf + k2);
      } else {
        throw ManifoldError("mirror did not reverse face orientation");
      }
    }
  }
  detail::assemble(r, twins, m.vertex_count());
  return r;
}

namespace detail {

inline std::optional<std::vector<HalfEdgeId>> try_map(const DeltaMesh& x, const DeltaMesh& y,
                                                      HalfEdgeId hx, HalfEdgeId hy) {
  std::vector<HalfEdgeId> map(x.half_edges.size(), -1), inv(y.half_edges.size(), -1);
  std::vector<HalfEdgeId> stack{hx};
  map[hx] = hy;
  inv[hy] = hx;
  auto link = [&](HalfEdgeId a, HalfEdgeId b) {
    if (map[a] < 0 && inv[b] < 0) {
      map[a] = b;
      inv[b] = a;
      stack.push_back(a);
      return true;
    }
    return map[a] == b && inv[b] == a;
  };
  while (!stack.empty()) {
    const HalfEdgeId h = stack.back();
    stack.pop_back();
    const HalfEdgeId k = map[h];
    if (!link(DeltaMesh::next(h), DeltaMesh::next(k))) return std::nullopt;
    if (!link(x.twin(h), y.twin(k))) return std::nullopt;
  }
  if (std::find(map.begin(), map.end(), -1) != map.end()) return std::nullopt;
  return map;
}

}  // namespace detail

/// Orientation-preserving combinatorial isomorphism search. Returns the
/// induced vertex map x -> y when one exists.
inline std::optional<std::vector<VertexId>> find_isomorphism(const DeltaMesh& x, const DeltaMesh& y) {
  if (x.face_count() != y.face_count() || x.vertex_count() != y.vertex_count() ||
      x.face_count() == 0) {
    return std::nullopt;
  }
  const HalfEdgeId hx = 0;
  const std::size_t deg = x.degree(x.origin(hx));
  for (HalfEdgeId hy = 0; hy < static_cast<HalfEdgeId>(y.half_edges.size()); ++hy) {
    if (y.degree(y.origin(hy)) != deg) continue;
    const auto map = detail::try_map(x, y, hx, hy);
    if (!map) continue;
    std::vector<VertexId> vmap(x.vertex_count(), -1);
    bool ok = true;
    for (HalfEdgeId h = 0; h < static_cast<HalfEdgeId>(map->size()) && ok; ++h) {
      auto& slot = vmap[x.origin(h)];
      const VertexId target = y.origin((*map)[h]);
      if (slot >= 0 && slot != target) ok = false;
      slot = target;
    }
    if (ok) return vmap;
  }
  return std::nullopt;
}

inline bool isomorphic(const DeltaMesh& x, const DeltaMesh& y) { return find_isomorphism(x, y).has_value(); }

/// Sum over vertices of (6 - degree); equals 12 exactly when the total
/// angular defect with unit equilateral faces is 4*pi.
inline Int total_defect_sixths(const DeltaMesh& m) {
  Int total = 0;
  for (VertexId v = 0; v < static_cast<VertexId>(m.vertex_count()); ++v) {
    total += 6 - static_cast<Int>(m.degree(v));
  }
  return total;
}

}  // namespace geofold
