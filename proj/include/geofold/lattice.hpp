#pragma once

// Exact arithmetic on the unit triangular grid and the quotient of the plane
// by the symmetry group of the regular tetrahedron's unfolding.
//
// Grid coordinates (p, q) denote the point p*ex + q*ey where ex and ey are
// unit vectors 60 degrees apart. The tetrahedron with edge vector a*ex + b*ey
// unfolds onto the grid; its surface is the plane modulo the group
//
//     G = { x -> +x + t, x -> -x + t : t in T },   T = Z*u + Z*v,
//
// with u = (2a, 2b) and v = (-2b, 2a + 2b). The half-turns x -> -x + t are
// rotations by 180 degrees about t/2, which is always a vertex of the
// side-|a*ex + b*ey| lattice, i.e. the midpoint of an edge of the unfolded
// net and a corner of the folded tetrahedron.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace geofold {

using Int = std::int64_t;

namespace detail {

inline Int floor_div(Int n, Int d) {
  Int q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

inline Int floor_mod(Int n, Int d) { return n - floor_div(n, d) * d; }

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

}  // namespace detail

/// Validates a deltahedron parameter pair; throws std::invalid_argument.
inline void require_valid_pair(Int a, Int b) {
  if (a < 0 || b < 0) {
    throw std::invalid_argument("parameters (a, b) must be nonnegative, got (" + std::to_string(a) +
                                ", " + std::to_string(b) + ")");
  }
  if (a == 0 && b == 0) throw std::invalid_argument("parameters (a, b) must not both be zero");
}

/// Number of triangles of deltahedron (a, b): 4(a^2 + ab + b^2).
inline Int s_value(Int a, Int b) {
  require_valid_pair(a, b);
  return 4 * (a * a + a * b + b * b);
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct GridCoord {
  Int p = 0;
  Int q = 0;

  friend constexpr bool operator==(const GridCoord&, const GridCoord&) = default;
  friend constexpr GridCoord operator+(GridCoord l, GridCoord r) { return {l.p + r.p, l.q + r.q}; }
  friend constexpr GridCoord operator-(GridCoord l, GridCoord r) { return {l.p - r.p, l.q - r.q}; }
  friend constexpr GridCoord operator-(GridCoord c) { return {-c.p, -c.q}; }
  friend constexpr GridCoord operator*(Int k, GridCoord c) { return {k * c.p, k * c.q}; }

  /// Row-major order: q first, then p.
  friend constexpr std::strong_ordering operator<=>(const GridCoord& l, const GridCoord& r) {
    if (auto c = l.q <=> r.q; c != 0) return c;
    return l.p <=> r.p;
  }
};

inline Point2 to_euclid(GridCoord c) {
  return {static_cast<double>(c.p) + 0.5 * static_cast<double>(c.q),
          static_cast<double>(c.q) * std::sqrt(3.0) / 2.0};
}

/// 60 degree counterclockwise rotation about the origin: ex -> ey, ey -> ey - ex.
constexpr GridCoord rotate60(GridCoord c) { return {-c.q, c.p + c.q}; }

enum class Orient : std::uint8_t { Up = 0, Down = 1 };

struct LatticeTriangle {
  GridCoord anchor;
  Orient orient = Orient::Up;

  friend constexpr bool operator==(const LatticeTriangle&, const LatticeTriangle&) = default;
  friend constexpr std::strong_ordering operator<=>(const LatticeTriangle& l,
                                                    const LatticeTriangle& r) {
    if (auto c = l.anchor <=> r.anchor; c != 0) return c;
    return static_cast<int>(l.orient) <=> static_cast<int>(r.orient);
  }

  /// Corners in counterclockwise order.
  constexpr std::array<GridCoord, 3> corners() const {
    const auto [p, q] = anchor;
    if (orient == Orient::Up) return {{{p, q}, {p + 1, q}, {p, q + 1}}};
    return {{{p + 1, q}, {p + 1, q + 1}, {p, q + 1}}};
  }

  /// Next triangle along the horizontal row (increasing x).
  constexpr LatticeTriangle next_in_row() const {
    if (orient == Orient::Up) return {anchor, Orient::Down};
    return {{anchor.p + 1, anchor.q}, Orient::Up};
  }
};

/// Recovers the unit triangle with the given corner set. The corner sum is
/// (3p+1, 3q+1) for an Up triangle and (3p+2, 3q+2) for a Down triangle.
inline LatticeTriangle triangle_from_corners(GridCoord c0, GridCoord c1, GridCoord c2) {
  const GridCoord sum = c0 + c1 + c2;
  const Int rp = detail::floor_mod(sum.p, 3);
  const Int rq = detail::floor_mod(sum.q, 3);
  if (rp != rq || rp == 0) throw std::invalid_argument("corners do not form a unit lattice triangle");
  const Orient o = rp == 1 ? Orient::Up : Orient::Down;
  const LatticeTriangle t{{detail::floor_div(sum.p, 3), detail::floor_div(sum.q, 3)}, o};
  const auto cs = t.corners();
  for (const GridCoord& c : {c0, c1, c2}) {
    if (c != cs[0] && c != cs[1] && c != cs[2]) {
      throw std::invalid_argument("corners do not form a unit lattice triangle");
    }
  }
  return t;
}

inline LatticeTriangle rotate60(const LatticeTriangle& t) {
  const auto c = t.corners();
  return triangle_from_corners(rotate60(c[0]), rotate60(c[1]), rotate60(c[2]));
}

/// Applies rotate60 `times` times (any integer, taken modulo 6).
inline LatticeTriangle rotate60(LatticeTriangle t, int times) {
  const int k = static_cast<int>(detail::floor_mod(times, 6));
  for (int i = 0; i < k; ++i) t = rotate60(t);
  return t;
}

/// A direct isometry of the grid of the form x -> sign*x + offset with
/// sign = +1 (translation) or -1 (half-turn about offset/2).
struct Isometry {
  enum class Kind : std::uint8_t { Translation, HalfTurn };

  Kind kind = Kind::Translation;
  GridCoord offset;

  static constexpr Isometry identity() { return {}; }
  static constexpr Isometry translation(GridCoord t) { return {Kind::Translation, t}; }
  /// Half-turn about the point center2/2 (center given in doubled coordinates).
  static constexpr Isometry half_turn(GridCoord center2) { return {Kind::HalfTurn, center2}; }

  friend constexpr bool operator==(const Isometry&, const Isometry&) = default;

  constexpr int sign() const { return kind == Kind::Translation ? 1 : -1; }
  /// Rotation center in doubled coordinates; meaningful for half-turns only.
  constexpr GridCoord center_doubled() const { return offset; }

  constexpr GridCoord operator()(GridCoord x) const {
    return kind == Kind::Translation ? x + offset : offset - x;
  }

  LatticeTriangle operator()(const LatticeTriangle& t) const {
    if (kind == Kind::Translation) return {t.anchor + offset, t.orient};
    // -Up(p,q) = Down(-p-1, -q-1) and vice versa.
    const GridCoord neg{-t.anchor.p - 1, -t.anchor.q - 1};
    return {neg + offset, t.orient == Orient::Up ? Orient::Down : Orient::Up};
  }

  /// (*this) after `first`.
  constexpr Isometry compose(const Isometry& first) const {
    const GridCoord off = (*this)(first.offset);
    const bool same = kind == first.kind;
    return {same ? Kind::Translation : Kind::HalfTurn, off};
  }

  constexpr Isometry inverse() const {
    if (kind == Kind::HalfTurn) return *this;
    return translation(-offset);
  }
};

template <typename T>
struct Canonical {
  T rep;
  Isometry to_rep;  // maps the input onto rep
};

/// The symmetry group of the tetrahedral tiling for parameters (a, b).
class TilingGroup {
 public:
  TilingGroup(Int a, Int b) : a_(a), b_(b) {
    require_valid_pair(a, b);
    u_ = {2 * a, 2 * b};
    v_ = {-2 * b, 2 * a + 2 * b};
    // Hermite basis of T: (e, f) with f > 0 minimal, and (d, 0).
    const auto [g, x, y] = detail::extended_gcd(u_.q, v_.q);
    row_step_ = x * u_ + y * v_;
    const GridCoord horiz = (v_.q / g) * u_ - (u_.q / g) * v_;
    row_period_ = horiz.p < 0 ? -horiz.p : horiz.p;
    row_step_.p = detail::floor_mod(row_step_.p, row_period_);
    if (row_period_ * row_step_.q != determinant()) {
      throw std::logic_error("tiling group basis reduction failed");
    }
  }

  Int a() const { return a_; }
  Int b() const { return b_; }
  GridCoord u() const { return u_; }
  GridCoord v() const { return v_; }
  /// det[u; v] in the grid basis; equals s_value(a, b).
  Int determinant() const { return u_.p * v_.q - u_.q * v_.p; }

  /// Fundamental translation cell is [0, cell_width) x [0, cell_height) after reduction.
  Int cell_width() const { return row_period_; }
  Int cell_height() const { return row_step_.q; }
  /// Smallest x > 0 with (x, 0) in T.
  Int row_period() const { return row_period_; }

  /// The four half-turn center classes in doubled coordinates: 0, 2w1, 2w2, 2(w1+w2)
  /// with w1 = (a, b) the tetrahedron edge vector and w2 its 60 degree rotation.
  std::array<GridCoord, 4> half_turn_centers() const { return {{{0, 0}, u_, v_, u_ + v_}}; }

  bool is_translation(GridCoord t) const {
    if (detail::floor_mod(t.q, row_step_.q) != 0) return false;
    const GridCoord rest = t - (t.q / row_step_.q) * row_step_;
    return detail::floor_mod(rest.p, row_period_) == 0;
  }

  bool contains(const Isometry& g) const { return is_translation(g.offset); }

  /// Reduces x into the fundamental translation cell; returns the translation used.
  GridCoord reduce(GridCoord x, GridCoord* shift = nullptr) const {
    const Int k = detail::floor_div(x.q, row_step_.q);
    GridCoord r = x - k * row_step_;
    const Int m = detail::floor_div(r.p, row_period_);
    r.p -= m * row_period_;
    if (shift) *shift = r - x;
    return r;
  }

  Canonical<GridCoord> canonical_point(GridCoord x) const {
    GridCoord s1, s2;
    const GridCoord r1 = reduce(x, &s1);
    const GridCoord r2 = reduce(-x, &s2);
    if (r2 < r1) return {r2, Isometry::half_turn(s2)};
    return {r1, Isometry::translation(s1)};
  }

  /// Orbit representative: smallest (q, p, orient) among members in the cell.
  Canonical<LatticeTriangle> canonical_triangle(const LatticeTriangle& t) const {
    GridCoord s1;
    const LatticeTriangle r1{reduce(t.anchor, &s1), t.orient};
    const LatticeTriangle neg = Isometry::half_turn({0, 0})(t);
    GridCoord s2;
    const LatticeTriangle r2{reduce(neg.anchor, &s2), neg.orient};
    if (r2 < r1) return {r2, Isometry::half_turn(s2)};
    return {r1, Isometry::translation(s1)};
  }

 private:
  Int a_, b_;
  GridCoord u_, v_;
  GridCoord row_step_;
  Int row_period_ = 0;
};

inline TilingGroup tiling_group(Int a, Int b) { return TilingGroup(a, b); }

inline LatticeTriangle canonical_triangle(const LatticeTriangle& t, const TilingGroup& g) {
  return g.canonical_triangle(t).rep;
}

}  // namespace geofold
