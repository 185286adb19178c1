#pragma once

// Geodesic band decomposition. A straight row of unit triangles in the tiling
// plane folds onto a closed band of faces on the deltahedron; the row closes
// up once it reaches a translated copy of its first triangle.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geofold/lattice.hpp"
#include "geofold/mesh.hpp"

namespace geofold {

/// One of the three lattice line directions: 0 along ex, 1 along ey, 2 along ey - ex.
enum class StripDirection : int { Horizontal = 0, Rising = 1, Falling = 2 };

inline Int band_count(Int a, Int b) {
  require_valid_pair(a, b);
  return std::gcd(a, b);
}

struct GeodesicBand {
  Int a = 0;
  Int b = 0;
  StripDirection direction = StripDirection::Horizontal;
  /// Faces in strip order; cyclic.
  std::vector<FaceId> faces;
  /// The strip's lattice triangles in the direction's frame, where the strip
  /// is a horizontal row. Rotating these by 60*direction degrees gives the
  /// cells in the tiling plane.
  std::vector<LatticeTriangle> cells;

  std::size_t size() const { return faces.size(); }
};

struct PlanarStrip {
  /// Alternating Up/Down triangles in row q = 0 starting at the origin.
  std::vector<LatticeTriangle> triangles;
  /// Translation identifying the strip's end with its start, (x, 0).
  GridCoord closure;
};

/// `count` consecutive triangles of the horizontal row starting at `start`.
inline std::vector<LatticeTriangle> walk_row(const LatticeTriangle& start, std::size_t count) {
  std::vector<LatticeTriangle> cells;
  cells.reserve(count);
  LatticeTriangle t = start;
  for (std::size_t i = 0; i < count; ++i) {
    cells.push_back(t);
    t = t.next_in_row();
  }
  return cells;
}

/// Decomposes m into geodesic bands along `dir`. Band starts are the smallest
/// uncovered FaceId; each band runs in increasing x of its frame.
inline std::vector<GeodesicBand> trace_bands(const DeltaMesh& m,
                                             StripDirection dir = StripDirection::Horizontal) {
  const TilingGroup g(m.a, m.b);
  const int turns = static_cast<int>(dir);
  std::vector<FaceId> owner(m.face_count(), -1);
  std::vector<GeodesicBand> bands;

  auto face_of = [&](const LatticeTriangle& rep) {
    const auto& reps = m.face_lattice_rep;
    const auto it = std::lower_bound(reps.begin(), reps.end(), rep);
    if (it == reps.end() || *it != rep) throw ManifoldError("band cell does not map to a face");
    return static_cast<FaceId>(it - reps.begin());
  };

  for (FaceId start = 0; start < static_cast<FaceId>(m.face_count()); ++start) {
    if (owner[start] >= 0) continue;
    GeodesicBand band{m.a, m.b, dir, {}, {}};
    LatticeTriangle cell = rotate60(m.face_lattice_rep[start], -turns);
    for (;;) {
      const FaceId f = face_of(g.canonical_triangle(rotate60(cell, turns)).rep);
      if (f == start && !band.faces.empty()) break;
      if (owner[f] >= 0) {
        throw ManifoldError("band revisits a face before closing");
      }
      owner[f] = static_cast<FaceId>(bands.size());
      band.faces.push_back(f);
      band.cells.push_back(cell);
      cell = cell.next_in_row();
    }
    bands.push_back(std::move(band));
  }
  for (const auto& band : bands) {
    if (band.size() != bands.front().size()) throw ManifoldError("bands have unequal lengths");
  }
  return bands;
}

/// Translates the band's row so it starts at the origin.
inline PlanarStrip unfold_band(const GeodesicBand& band) {
  PlanarStrip strip;
  if (band.cells.empty()) return strip;
  const GridCoord shift = -band.cells.front().anchor;
  strip.triangles.reserve(band.cells.size());
  for (const auto& c : band.cells) strip.triangles.push_back({c.anchor + shift, c.orient});
  strip.closure = {static_cast<Int>(band.cells.size() / 2), 0};
  return strip;
}

/// True when no two cells are images of each other under a half-turn of the group.
inline bool no_half_turn_in_cells(const std::vector<LatticeTriangle>& cells, const TilingGroup& g) {
  const Isometry negate = Isometry::half_turn({0, 0});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const LatticeTriangle n = negate(cells[i]);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].orient == n.orient && g.is_translation(cells[j].anchor - n.anchor)) return false;
    }
  }
  return true;
}

/// True when no two cells are translates of each other by the group.
inline bool no_translate_in_cells(const std::vector<LatticeTriangle>& cells, const TilingGroup& g) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i].orient == cells[j].orient && g.is_translation(cells[j].anchor - cells[i].anchor)) {
        return false;
      }
    }
  }
  return true;
}

// The group is invariant under 60 degree rotation, so checks run in the
// band's own frame.
inline bool no_half_turn_in_band(const GeodesicBand& band) {
  return no_half_turn_in_cells(band.cells, TilingGroup(band.a, band.b));
}

}  // namespace geofold
