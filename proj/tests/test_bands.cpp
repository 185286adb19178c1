#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "geofold/bands.hpp"
#include "oracles.hpp"

using namespace geofold;

TEST(BandCount, Gcd) {
  EXPECT_EQ(band_count(2, 2), 2);
  EXPECT_EQ(band_count(5, 6), 1);
  EXPECT_EQ(band_count(6, 9), 3);
  EXPECT_EQ(band_count(4, 0), 4);
  EXPECT_THROW(band_count(0, 0), std::invalid_argument);
}

TEST(TraceBands, Tetrahedron) {
  const auto bands = trace_bands(build_mesh(1, 0));
  ASSERT_EQ(bands.size(), 1u);
  EXPECT_EQ(bands[0].size(), 4u);
  const std::set<FaceId> faces(bands[0].faces.begin(), bands[0].faces.end());
  EXPECT_EQ(faces.size(), 4u);
}

TEST(TraceBands, TwoTwoHasTwoEqualBands) {
  const auto bands = trace_bands(build_mesh(2, 2));
  ASSERT_EQ(bands.size(), 2u);
  EXPECT_EQ(bands[0].size(), 24u);
  EXPECT_EQ(bands[1].size(), 24u);
}

TEST(TraceBands, TwoOneFirstRepeatAt28) {
  // Oracle: walk the row in the plane and find the first cell that is a pure
  // translate of the start cell.
  const LatticeTriangle start{{0, 0}, Orient::Up};
  LatticeTriangle t = start;
  int steps = 0;
  do {
    t = t.next_in_row();
    ++steps;
  } while (!(t.orient == start.orient && oracle::in_translation_lattice(2, 1, t.anchor - start.anchor)));
  EXPECT_EQ(steps, 28);

  const auto bands = trace_bands(build_mesh(2, 1));
  ASSERT_EQ(bands.size(), 1u);
  EXPECT_EQ(bands[0].size(), 28u);
}

TEST(TraceBands, PartitionForSmallPairs) {
  for (Int a = 1; a <= 8; ++a) {
    for (Int b = 1; b <= 8; ++b) {
      const DeltaMesh m = build_mesh(a, b);
      const auto bands = trace_bands(m);
      const Int k = std::gcd(a, b);
      ASSERT_EQ(static_cast<Int>(bands.size()), k) << a << "," << b;
      std::vector<int> hits(m.face_count(), 0);
      for (const auto& band : bands) {
        ASSERT_EQ(static_cast<Int>(band.size()), s_value(a, b) / k);
        for (FaceId f : band.faces) ++hits[f];
      }
      for (int h : hits) ASSERT_EQ(h, 1);
    }
  }
}

TEST(TraceBands, ConsecutiveFacesShareAnEdge) {
  const DeltaMesh m = build_mesh(3, 1);
  for (const auto& band : trace_bands(m)) {
    for (std::size_t i = 0; i < band.size(); ++i) {
      const FaceId f = band.faces[i], g = band.faces[(i + 1) % band.size()];
      bool adjacent = false;
      for (int e = 0; e < 3; ++e) adjacent |= DeltaMesh::face_of(m.twin(3 * f + e)) == g;
      EXPECT_TRUE(adjacent);
    }
  }
}

TEST(TraceBands, CountIndependentOfDirection) {
  for (Int a = 1; a <= 6; ++a) {
    for (Int b = 1; b <= 6; ++b) {
      const DeltaMesh m = build_mesh(a, b);
      for (auto dir : {StripDirection::Horizontal, StripDirection::Rising, StripDirection::Falling}) {
        const auto bands = trace_bands(m, dir);
        EXPECT_EQ(static_cast<Int>(bands.size()), std::gcd(a, b)) << a << "," << b << " dir " << static_cast<int>(dir);
        for (const auto& band : bands) EXPECT_TRUE(no_half_turn_in_band(band));
      }
    }
  }
}

TEST(TraceBands, StartsAtSmallestUncoveredFace) {
  const DeltaMesh m = build_mesh(4, 2);
  const auto bands = trace_bands(m);
  std::set<FaceId> covered;
  for (const auto& band : bands) {
    FaceId smallest = 0;
    while (covered.count(smallest)) ++smallest;
    EXPECT_EQ(band.faces.front(), smallest);
    covered.insert(band.faces.begin(), band.faces.end());
  }
}

TEST(UnfoldBand, StripShapes) {
  struct Case {
    Int a, b;
    std::size_t triangles;
    Int closure;
  };
  for (const Case& c : {Case{1, 0, 4, 2}, Case{1, 1, 12, 6}, Case{5, 6, 364, 182}}) {
    const auto bands = trace_bands(build_mesh(c.a, c.b));
    ASSERT_EQ(bands.size(), 1u);
    const PlanarStrip strip = unfold_band(bands[0]);
    EXPECT_EQ(strip.triangles.size(), c.triangles);
    EXPECT_EQ(strip.closure, (GridCoord{c.closure, 0}));
  }
}

TEST(UnfoldBand, StraightAlternatingRow) {
  for (auto dir : {StripDirection::Horizontal, StripDirection::Falling}) {
    for (const auto& band : trace_bands(build_mesh(3, 3), dir)) {
      const PlanarStrip strip = unfold_band(band);
      for (std::size_t i = 0; i < strip.triangles.size(); ++i) {
        for (const GridCoord& c : strip.triangles[i].corners()) {
          EXPECT_TRUE(c.q == 0 || c.q == 1);
        }
        if (i > 0) EXPECT_NE(strip.triangles[i].orient, strip.triangles[i - 1].orient);
      }
      // The group is rotation invariant, so the closure is a translation in every frame.
      EXPECT_TRUE(TilingGroup(3, 3).is_translation(strip.closure));
    }
  }
}

TEST(UnfoldBand, ClosureIsGroupTranslation) {
  for (Int a = 1; a <= 5; ++a) {
    for (Int b = 0; b <= 5; ++b) {
      const TilingGroup g(a, b);
      const auto bands = trace_bands(build_mesh(a, b));
      const PlanarStrip strip = unfold_band(bands.front());
      EXPECT_TRUE(g.is_translation(strip.closure));
      EXPECT_EQ(strip.closure.p, g.row_period());
    }
  }
}

TEST(NoHalfTurn, TracedBandsOfSmallExamples) {
  for (const auto& band : trace_bands(build_mesh(2, 1))) EXPECT_TRUE(no_half_turn_in_band(band));
  for (const auto& band : trace_bands(build_mesh(3, 3))) EXPECT_TRUE(no_half_turn_in_band(band));
}

TEST(NoHalfTurn, OverExtendedStripHasDuplicates) {
  const DeltaMesh m = build_mesh(2, 1);
  const TilingGroup g(2, 1);
  const auto band = trace_bands(m).front();
  const auto cells = walk_row(band.cells.front(), band.size() + 2);
  EXPECT_FALSE(no_translate_in_cells(cells, g));
  EXPECT_TRUE(no_translate_in_cells(band.cells, g));
}

TEST(NoHalfTurn, DetectsHalfTurnPair) {
  const TilingGroup g(2, 1);
  const LatticeTriangle t{{1, 0}, Orient::Up};
  const LatticeTriangle turned = Isometry::half_turn(g.u())(t);
  EXPECT_FALSE(no_half_turn_in_cells({t, turned}, g));
  EXPECT_TRUE(no_half_turn_in_cells({t, t.next_in_row()}, g));
}
