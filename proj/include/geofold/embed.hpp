#pragma once

// Numerical embedding of a deltahedron with unit edges by dynamic relaxation.
//
// Vertices start at their geodesic positions on the source tetrahedron and
// are pushed outward by a small seeded perturbation. An explicit pseudo-
// dynamic iteration then applies linear edge springs with rest length 1 and a
// decaying inflation pressure, with kinetic damping: all velocities are reset
// whenever the total kinetic energy drops.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geofold/lattice.hpp"
#include "geofold/mesh.hpp"

namespace geofold {

using Vec3 = Eigen::Vector3d;
using Positions = std::vector<Vec3>;

/// Volume of the regular tetrahedron with unit edges.
inline const double kUnitTetrahedronVolume = 1.0 / (6.0 * std::numbers::sqrt2);

struct RelaxConfig {
  double tolerance = 1e-9;
  std::int64_t max_iterations = 500000;
  double time_step = 0.05;
  bool kinetic_damping = true;
  double initial_pressure = 0.2;
  /// Pressure is multiplied by this every step; it is treated as zero once it
  /// falls below pressure_cutoff.
  double pressure_decay = 0.999;
  double pressure_cutoff = 1e-13;
  /// Upper bound of the seeded outward perturbation in initial_guess.
  double max_perturbation = 0.1;
  int restarts = 8;
  std::uint64_t seed = 0;
  /// Concurrent restarts in relax_max_volume.
  int jobs = 1;

  void validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
    if (!(time_step > 0.0)) throw std::invalid_argument("time_step must be positive");
    if (restarts <= 0) throw std::invalid_argument("restarts must be positive");
    if (pressure_decay < 0.0 || pressure_decay >= 1.0) {
      throw std::invalid_argument("pressure_decay must lie in [0, 1)");
    }
  }
};

struct Embedding {
  Positions positions;
  /// max | |edge| - 1 | over all edges.
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::int64_t iterations = 0;
};

struct Metrics {
  double volume = 0.0;
  double relative_volume = 0.0;
  double min_solid_angle = 0.0;
  double max_solid_angle = 0.0;
  bool all_popped = false;
};

inline double max_edge_residual(const DeltaMesh& m, const Positions& x) {
  double r = 0.0;
  for (const auto& [i, j] : m.edges()) r = std::max(r, std::abs((x[j] - x[i]).norm() - 1.0));
  return r;
}

/// Signed enclosed volume; positive for outward orientation.
inline double volume(const Positions& x, const DeltaMesh& m) {
  double v = 0.0;
  for (const auto& f : m.faces) v += x[f[0]].dot(x[f[1]].cross(x[f[2]]));
  return v / 6.0;
}

inline double volume(const Embedding& e, const DeltaMesh& m) { return volume(e.positions, m); }

/// Volume relative to the regular tetrahedron of equal surface area.
inline double relative_volume(double vol, const DeltaMesh& m) {
  const double scale = static_cast<double>(m.face_count()) / 4.0;
  return vol / (std::pow(scale, 1.5) * kUnitTetrahedronVolume);
}

struct DegenerateConeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interior solid angle of the cone spanned by edge directions `dirs` around an
/// apex, listed counterclockwise as seen from outside. Uses the turning-angle
/// form of Gauss-Bonnet on the unit sphere; result in (0, 4 pi).
inline double cone_solid_angle(const std::vector<Vec3>& dirs) {
  const std::size_t n = dirs.size();
  if (n < 3) throw DegenerateConeError("cone needs at least three edges");
  std::vector<Vec3> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double len = dirs[i].norm();
    if (!(len > 0.0)) throw DegenerateConeError("zero-length edge at cone apex");
    d[i] = dirs[i] / len;
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& prev = d[(i + n - 1) % n];
    const Vec3& cur = d[i];
    const Vec3& next = d[(i + 1) % n];
    const Vec3 t_in = -(prev - prev.dot(cur) * cur);
    const Vec3 t_out = next - next.dot(cur) * cur;
    const double lin = t_in.norm(), lout = t_out.norm();
    if (lin < 1e-12 || lout < 1e-12) throw DegenerateConeError("collinear consecutive cone edges");
    turning += std::atan2(cur.dot(t_in.cross(t_out)) / (lin * lout), t_in.dot(t_out) / (lin * lout));
  }
  return 2.0 * std::numbers::pi + turning;
}

inline double solid_angle(const Positions& x, const DeltaMesh& m, VertexId v) {
  std::vector<Vec3> dirs;
  for (VertexId w : m.ring(v)) dirs.push_back(x[w] - x[v]);
  return cone_solid_angle(dirs);
}

inline double solid_angle(const Embedding& e, const DeltaMesh& m, VertexId v) {
  return solid_angle(e.positions, m, v);
}

inline std::vector<double> solid_angles(const Positions& x, const DeltaMesh& m) {
  std::vector<double> out(m.vertex_count());
  for (VertexId v = 0; v < static_cast<VertexId>(m.vertex_count()); ++v) out[v] = solid_angle(x, m, v);
  return out;
}

/// Every vertex has interior solid angle strictly inside (0, 2 pi).
inline bool all_popped(const Positions& x, const DeltaMesh& m) {
  for (double w : solid_angles(x, m)) {
    if (!(w > 0.0 && w < 2.0 * std::numbers::pi)) return false;
  }
  return true;
}

inline bool all_popped(const Embedding& e, const DeltaMesh& m) { return all_popped(e.positions, m); }

/// Sum over vertices of 2 pi minus the incident face angles.
inline double total_angle_defect(const Positions& x, const DeltaMesh& m) {
  double total = 2.0 * std::numbers::pi * static_cast<double>(m.vertex_count());
  for (const auto& f : m.faces) {
    for (int i = 0; i < 3; ++i) {
      const Vec3 e1 = x[f[(i + 1) % 3]] - x[f[i]];
      const Vec3 e2 = x[f[(i + 2) % 3]] - x[f[i]];
      total -= std::atan2(e1.cross(e2).norm(), e1.dot(e2));
    }
  }
  return total;
}

inline Metrics compute_metrics(const Positions& x, const DeltaMesh& m) {
  Metrics mt;
  mt.volume = volume(x, m);
  mt.relative_volume = relative_volume(mt.volume, m);
  const auto angles = solid_angles(x, m);
  const auto [lo, hi] = std::minmax_element(angles.begin(), angles.end());
  mt.min_solid_angle = *lo;
  mt.max_solid_angle = *hi;
  mt.all_popped = mt.min_solid_angle > 0.0 && mt.max_solid_angle < 2.0 * std::numbers::pi;
  return mt;
}

/// Area-weighted vertex normals (unnormalized: one third of the incident
/// face area vectors, i.e. the volume gradient).
inline std::vector<Vec3> volume_gradient(const Positions& x, const DeltaMesh& m) {
  std::vector<Vec3> g(x.size(), Vec3::Zero());
  for (const auto& f : m.faces) {
    const Vec3 n = (x[f[1]] - x[f[0]]).cross(x[f[2]] - x[f[0]]) / 6.0;
    for (VertexId v : f) g[v] += n;
  }
  return g;
}

/// Places every vertex at its point on the surface of the regular
/// tetrahedron with edge |a*ex + b*ey|, so lattice edges have unit length.
inline Positions geodesic_positions(const DeltaMesh& m) {
  const Int a = m.a, b = m.b;
  const Int n = a * a + a * b + b * b;
  const double scale = std::sqrt(static_cast<double>(n)) / (2.0 * std::numbers::sqrt2);
  // Corners indexed by parity class of the edge-lattice vertex (i mod 2, j mod 2).
  const std::array<Vec3, 4> corner{Vec3(1, 1, 1) * scale, Vec3(1, -1, -1) * scale,
                                   Vec3(-1, 1, -1) * scale, Vec3(-1, -1, 1) * scale};
  auto corner_of = [&](Int i, Int j) { return corner[detail::floor_mod(i, 2) + 2 * detail::floor_mod(j, 2)]; };

  Positions x(m.vertex_count());
  for (std::size_t v = 0; v < x.size(); ++v) {
    const auto [p, q] = m.vertex_lattice_rep[v];
    // Coordinates in the edge-lattice basis w1 = (a, b), w2 = (-b, a + b), scaled by n.
    const Int sn = p * (a + b) + q * b;
    const Int tn = q * a - p * b;
    const Int i = detail::floor_div(sn, n), j = detail::floor_div(tn, n);
    const double fs = static_cast<double>(sn - i * n) / static_cast<double>(n);
    const double ft = static_cast<double>(tn - j * n) / static_cast<double>(n);
    if (fs + ft <= 1.0) {
      x[v] = (1.0 - fs - ft) * corner_of(i, j) + fs * corner_of(i + 1, j) + ft * corner_of(i, j + 1);
    } else {
      x[v] = (fs + ft - 1.0) * corner_of(i + 1, j + 1) + (1.0 - ft) * corner_of(i + 1, j) +
             (1.0 - fs) * corner_of(i, j + 1);
    }
  }
  return x;
}

/// Vertices that sit on a corner of the source tetrahedron.
inline std::vector<bool> corner_vertices(const DeltaMesh& m) {
  std::vector<bool> out(m.vertex_count(), false);
  const TilingGroup g(m.a, m.b);
  for (std::size_t v = 0; v < out.size(); ++v) {
    const GridCoord c = m.vertex_lattice_rep[v];
    out[v] = g.is_translation(c + c);
  }
  return out;
}

/// Geodesic positions pushed outward along area-weighted normals by a seeded
/// random fraction of cfg.max_perturbation. Corner vertices stay put.
inline Positions initial_guess(const DeltaMesh& m, const RelaxConfig& cfg) {
  Positions x = geodesic_positions(m);
  const auto normals = volume_gradient(x, m);
  const auto corners = corner_vertices(m);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t v = 0; v < x.size(); ++v) {
    const double r = unit(rng);
    if (corners[v]) continue;
    const double len = normals[v].norm();
    if (len > 0.0) x[v] += (r * cfg.max_perturbation / len) * normals[v];
  }
  return x;
}

/// Reflects vertex v through the plane of its neighbours' centroid, normal to
/// the ring's area vector. For a degree-3 vertex this is an exact isometric
/// dimple of the tetrahedral cap.
inline Positions push_inward(Positions x, const DeltaMesh& m, VertexId v) {
  const auto ring = m.ring(v);
  Vec3 c = Vec3::Zero();
  for (VertexId w : ring) c += x[w];
  c /= static_cast<double>(ring.size());
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    n += (x[ring[i]] - c).cross(x[ring[(i + 1) % ring.size()]] - c);
  }
  if (n.norm() == 0.0) throw DegenerateConeError("vertex ring has no normal");
  n.normalize();
  x[v] -= 2.0 * (x[v] - c).dot(n) * n;
  return x;
}

/// Rigid gauge: centroid at the origin, principal axes of the vertex cloud
/// along x, y, z in decreasing spread, as a proper rotation.
inline void fix_gauge(Positions& x) {
  if (x.empty()) return;
  Vec3 c = Vec3::Zero();
  for (const auto& p : x) c += p;
  c /= static_cast<double>(x.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (auto& p : x) {
    p -= c;
    cov += p * p.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Matrix3d axes;
  for (int k = 0; k < 3; ++k) axes.col(k) = es.eigenvectors().col(2 - k);
  // Orient the first two axes by the sign of the third moment, then complete
  // a right-handed frame.
  for (int k = 0; k < 2; ++k) {
    double skew = 0.0;
    for (const auto& p : x) skew += std::pow(p.dot(axes.col(k)), 3);
    if (skew < 0.0) axes.col(k) = -axes.col(k);
  }
  axes.col(2) = axes.col(0).cross(axes.col(1));
  for (auto& p : x) p = axes.transpose() * p;
}

/// Dynamic relaxation toward unit edge lengths from p0.
inline Embedding relax(const DeltaMesh& m, Positions p0, const RelaxConfig& cfg) {
  cfg.validate();
  if (p0.size() != m.vertex_count()) throw std::invalid_argument("position count differs from vertex count");
  const auto edges = m.edges();
  const std::size_t nv = p0.size();
  Positions x = std::move(p0);
  Positions vel(nv, Vec3::Zero());
  Positions force(nv);
  double pressure = cfg.initial_pressure;
  double kinetic_prev = 0.0;

  Embedding best;
  best.positions = x;
  std::int64_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    std::fill(force.begin(), force.end(), Vec3::Zero());
    double residual = 0.0;
    for (const auto& [i, j] : edges) {
      const Vec3 d = x[j] - x[i];
      const double len = d.norm();
      const double strain = len - 1.0;
      residual = std::max(residual, std::abs(strain));
      const Vec3 f = (strain / len) * d;
      force[i] += f;
      force[j] -= f;
    }
    if (pressure == 0.0 && residual < best.residual) {
      best.residual = residual;
      best.positions = x;
      best.iterations = it;
      if (residual <= cfg.tolerance) {
        best.converged = true;
        break;
      }
    }
    if (pressure != 0.0) {
      const auto grad = volume_gradient(x, m);
      for (std::size_t v = 0; v < nv; ++v) force[v] += pressure * grad[v];
    }
    double kinetic = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      vel[v] += cfg.time_step * force[v];
      kinetic += 0.5 * vel[v].squaredNorm();
    }
    if (cfg.kinetic_damping && kinetic < kinetic_prev) {
      std::fill(vel.begin(), vel.end(), Vec3::Zero());
      kinetic = 0.0;
    }
    for (std::size_t v = 0; v < nv; ++v) x[v] += cfg.time_step * vel[v];
    kinetic_prev = kinetic;
    pressure *= cfg.pressure_decay;
    if (pressure < cfg.pressure_cutoff) pressure = 0.0;
  }
  if (!best.converged) best.iterations = it;
  if (pressure != 0.0 && std::isinf(best.residual)) {
    // Stopped while still inflating: report where the run ended.
    best.positions = x;
    best.residual = max_edge_residual(m, x);
  }
  for (const auto& p : best.positions) {
    if (!p.allFinite()) {
      best.converged = false;
      best.residual = std::numeric_limits<double>::infinity();
      break;
    }
  }
  fix_gauge(best.positions);
  return best;
}

struct Attempt {
  std::uint64_t seed = 0;
  double initial_pressure = 0.0;
  bool converged = false;
  double residual = 0.0;
  std::int64_t iterations = 0;
  double volume = 0.0;
  double relative_volume = 0.0;
  bool all_popped = false;
};

struct MaxVolumeResult {
  Embedding best;
  Metrics metrics;
  std::vector<Attempt> attempts;
};

struct NonConvergenceError : std::runtime_error {
  double best_residual;
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
};

/// Config of restart `index`: seed offset by the index, pressure varied over
/// a cycle of four magnitudes at or below cfg.initial_pressure. Larger
/// pressures run away (inflation outgrows the linear edge springs).
inline RelaxConfig restart_config(const RelaxConfig& cfg, int index) {
  RelaxConfig c = cfg;
  c.seed = cfg.seed + static_cast<std::uint64_t>(index);
  c.initial_pressure = cfg.initial_pressure * (1.0 - 0.15 * static_cast<double>(index % 4));
  return c;
}

/// Runs cfg.restarts seeded relaxations and keeps the converged state of
/// largest volume (ties go to the lower seed).
inline MaxVolumeResult relax_max_volume(const DeltaMesh& m, const RelaxConfig& cfg) {
  cfg.validate();
  struct Run {
    Embedding e;
    Attempt at;
  };
  auto run_one = [&m, &cfg](int i) {
    const RelaxConfig c = restart_config(cfg, i);
    Run r{relax(m, initial_guess(m, c), c), {}};
    r.at.seed = c.seed;
    r.at.initial_pressure = c.initial_pressure;
    r.at.converged = r.e.converged;
    r.at.residual = r.e.residual;
    r.at.iterations = r.e.iterations;
    r.at.volume = volume(r.e, m);
    r.at.relative_volume = relative_volume(r.at.volume, m);
    try {
      r.at.all_popped = all_popped(r.e, m);
    } catch (const DegenerateConeError&) {
      r.at.all_popped = false;
    }
    return r;
  };

  std::vector<Run> runs(cfg.restarts);
  const int jobs = std::max(1, cfg.jobs);
  for (int base = 0; base < cfg.restarts; base += jobs) {
    const int end = std::min(cfg.restarts, base + jobs);
    if (jobs == 1) {
      runs[base] = run_one(base);
      continue;
    }
    std::vector<std::future<Run>> pending;
    for (int i = base; i < end; ++i) pending.push_back(std::async(std::launch::async, run_one, i));
    for (int i = base; i < end; ++i) runs[i] = pending[i - base].get();
  }

  MaxVolumeResult out;
  std::optional<int> chosen;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.restarts; ++i) {
    out.attempts.push_back(runs[i].at);
    best_residual = std::min(best_residual, runs[i].e.residual);
    if (!runs[i].e.converged) continue;
    if (!chosen || runs[i].at.volume > runs[*chosen].at.volume) chosen = i;
  }
  if (!chosen) {
    throw NonConvergenceError("no restart converged for (" + std::to_string(m.a) + ", " +
                                  std::to_string(m.b) + ")",
                              best_residual);
  }
  out.best = std::move(runs[*chosen].e);
  out.metrics = compute_metrics(out.best.positions, m);
  return out;
}

struct TableCell {
  Int a = 0;
  Int b = 0;
  bool converged = false;
  double relative_volume = 0.0;
  /// Best residual reached; meaningful when not converged.
  double residual = 0.0;
  bool all_popped = false;
};

/// Relative volumes for 1 <= a <= b, a <= a_max, b <= b_max, in row-major order.
inline std::vector<TableCell> volume_table(Int a_max, Int b_max, const RelaxConfig& cfg) {
  if (a_max < 1 || b_max < 1) throw std::invalid_argument("table bounds must be at least 1");
  std::vector<TableCell> cells;
  for (Int a = 1; a <= a_max; ++a) {
    for (Int b = a; b <= b_max; ++b) {
      const DeltaMesh m = build_mesh(a, b);
      TableCell cell{a, b};
      try {
        const auto r = relax_max_volume(m, cfg);
        cell.converged = true;
        cell.relative_volume = r.metrics.relative_volume;
        cell.residual = r.best.residual;
        cell.all_popped = r.metrics.all_popped;
      } catch (const NonConvergenceError& e) {
        cell.residual = e.best_residual;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace geofold
