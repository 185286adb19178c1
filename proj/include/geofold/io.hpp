#pragma once

// File formats: mesh/band/report JSON, OBJ geometry, SVG papercraft strips,
// CSV group listings and volume tables. All writers are deterministic.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "geofold/bands.hpp"
#include "geofold/classify.hpp"
#include "geofold/embed.hpp"
#include "geofold/mesh.hpp"

namespace geofold::io {

using nlohmann::ordered_json;

inline std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline const char* orient_name(Orient o) { return o == Orient::Up ? "up" : "down"; }

inline ordered_json mesh_to_json(const DeltaMesh& m) {
  ordered_json j;
  j["a"] = m.a;
  j["b"] = m.b;
  j["face_count"] = m.face_count();
  j["edge_count"] = m.edge_count();
  j["vertex_count"] = m.vertex_count();
  j["faces"] = ordered_json::array();
  for (const auto& f : m.faces) j["faces"].push_back({f[0], f[1], f[2]});
  j["face_lattice"] = ordered_json::array();
  for (const auto& t : m.face_lattice_rep) {
    j["face_lattice"].push_back({t.anchor.p, t.anchor.q, orient_name(t.orient)});
  }
  j["vertex_lattice"] = ordered_json::array();
  for (const auto& c : m.vertex_lattice_rep) j["vertex_lattice"].push_back({c.p, c.q});
  return j;
}

inline ordered_json bands_to_json(const DeltaMesh& m, const std::vector<GeodesicBand>& bands) {
  ordered_json j;
  j["a"] = m.a;
  j["b"] = m.b;
  j["direction"] = bands.empty() ? 0 : static_cast<int>(bands.front().direction);
  j["band_count"] = bands.size();
  j["band_length"] = bands.empty() ? 0 : bands.front().size();
  j["bands"] = ordered_json::array();
  for (const auto& band : bands) {
    ordered_json b;
    b["faces"] = band.faces;
    b["cells"] = ordered_json::array();
    for (const auto& t : band.cells) b["cells"].push_back({t.anchor.p, t.anchor.q, orient_name(t.orient)});
    j["bands"].push_back(std::move(b));
  }
  return j;
}

/// Papercraft template: one unit edge is `mm_per_unit` millimetres. Outline in
/// solid black, fold lines in grey, the glue edge (strip end identified with
/// its start) dashed at both ends.
inline std::string strip_to_svg(const PlanarStrip& strip, double mm_per_unit = 10.0) {
  const double margin = 0.5;
  double xmin = 0.0, xmax = 0.0;
  for (const auto& t : strip.triangles) {
    for (const GridCoord& c : t.corners()) {
      const Point2 p = to_euclid(c);
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
    }
  }
  const double height = std::sqrt(3.0) / 2.0;
  const double w = (xmax - xmin + 2 * margin) * mm_per_unit;
  const double h = (height + 2 * margin) * mm_per_unit;
  auto X = [&](const Point2& p) { return format("%.3f", (p.x - xmin + margin) * mm_per_unit); };
  auto Y = [&](const Point2& p) { return format("%.3f", (height - p.y + margin) * mm_per_unit); };
  auto line = [&](GridCoord a, GridCoord b, const char* cls) {
    const Point2 pa = to_euclid(a), pb = to_euclid(b);
    return "  <line class=\"" + std::string(cls) + "\" x1=\"" + X(pa) + "\" y1=\"" + Y(pa) + "\" x2=\"" + X(pb) +
           "\" y2=\"" + Y(pb) + "\"/>\n";
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format("%.3f", w) << "mm\" height=\""
     << format("%.3f", h) << "mm\" viewBox=\"0 0 " << format("%.3f", w) << ' ' << format("%.3f", h) << "\">\n";
  os << "  <style>line{stroke-width:0.3;stroke-linecap:round}.cut{stroke:#000}"
        ".fold{stroke:#888}.glue{stroke:#000;stroke-dasharray:2,1}</style>\n";
  const auto& ts = strip.triangles;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto c = ts[i].corners();
    // Boundary edge on the row's bottom or top line.
    if (ts[i].orient == Orient::Up) {
      os << line(c[0], c[1], "cut");
    } else {
      os << line(c[1], c[2], "cut");
    }
    // Edge shared with the next triangle.
    const GridCoord s0 = ts[i].orient == Orient::Up ? c[1] : c[0];
    const GridCoord s1 = ts[i].orient == Orient::Up ? c[2] : c[1];
    os << line(s0, s1, i + 1 == ts.size() ? "glue" : "fold");
    if (i == 0) {
      os << line(c[2], c[0], "glue");
    }
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string groups_to_csv(const std::vector<SValueGroup>& groups) {
  std::ostringstream os;
  os << "s,s_over_4,members\n";
  for (const auto& g : groups) {
    os << g.s << ',' << g.s / 4 << ",\"";
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      os << (i ? " " : "") << '(' << g.members[i].first << ';' << g.members[i].second << ')';
    }
    os << "\"\n";
  }
  return os.str();
}

inline ordered_json groups_to_json(const std::vector<SValueGroup>& groups) {
  ordered_json j = ordered_json::array();
  for (const auto& g : groups) {
    ordered_json e;
    e["s"] = g.s;
    e["s_over_4"] = g.s / 4;
    e["members"] = ordered_json::array();
    for (const auto& [a, b] : g.members) e["members"].push_back({a, b});
    j.push_back(std::move(e));
  }
  return j;
}

inline std::string embedding_to_obj(const DeltaMesh& m, const Embedding& e) {
  std::ostringstream os;
  os << "# deltahedron (" << m.a << "," << m.b << ") F=" << m.face_count() << " V=" << m.vertex_count()
     << " residual=" << format("%.3e", e.residual) << '\n';
  for (const auto& p : e.positions) {
    os << "v " << format("%.15f", p.x()) << ' ' << format("%.15f", p.y()) << ' ' << format("%.15f", p.z()) << '\n';
  }
  for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  return os.str();
}

inline ordered_json config_to_json(const RelaxConfig& c) {
  ordered_json j;
  j["tolerance"] = c.tolerance;
  j["max_iterations"] = c.max_iterations;
  j["time_step"] = c.time_step;
  j["kinetic_damping"] = c.kinetic_damping;
  j["initial_pressure"] = c.initial_pressure;
  j["pressure_decay"] = c.pressure_decay;
  j["pressure_cutoff"] = c.pressure_cutoff;
  j["max_perturbation"] = c.max_perturbation;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  return j;
}

inline ordered_json report_to_json(const DeltaMesh& m, const RelaxConfig& cfg, const MaxVolumeResult& r) {
  ordered_json j;
  j["a"] = m.a;
  j["b"] = m.b;
  j["config"] = config_to_json(cfg);
  j["converged"] = r.best.converged;
  j["residual"] = r.best.residual;
  j["iterations"] = r.best.iterations;
  ordered_json mt;
  mt["volume"] = r.metrics.volume;
  mt["relative_volume"] = r.metrics.relative_volume;
  mt["min_solid_angle"] = r.metrics.min_solid_angle;
  mt["max_solid_angle"] = r.metrics.max_solid_angle;
  mt["all_popped"] = r.metrics.all_popped;
  j["metrics"] = mt;
  j["solid_angles"] = solid_angles(r.best.positions, m);
  j["attempts"] = ordered_json::array();
  for (const auto& at : r.attempts) {
    ordered_json a;
    a["seed"] = at.seed;
    a["initial_pressure"] = at.initial_pressure;
    a["converged"] = at.converged;
    a["residual"] = std::isfinite(at.residual) ? ordered_json(at.residual) : ordered_json(nullptr);
    a["iterations"] = at.iterations;
    a["volume"] = std::isfinite(at.volume) ? ordered_json(at.volume) : ordered_json(nullptr);
    a["relative_volume"] = std::isfinite(at.relative_volume) ? ordered_json(at.relative_volume) : ordered_json(nullptr);
    a["all_popped"] = at.all_popped;
    j["attempts"].push_back(std::move(a));
  }
  return j;
}

inline std::string table_cell_text(const TableCell& c) {
  if (c.converged) return format("%.6f", c.relative_volume);
  return "NC(" + format("%.3e", c.residual) + ")";
}

/// Upper-triangular layout: header row of b values, one row per a, empty
/// cells below the diagonal.
inline std::string table_to_csv(const std::vector<TableCell>& cells, Int a_max, Int b_max) {
  std::ostringstream os;
  os << "a\\b";
  for (Int b = 1; b <= b_max; ++b) os << ',' << b;
  os << '\n';
  for (Int a = 1; a <= a_max; ++a) {
    os << a;
    for (Int b = 1; b <= b_max; ++b) {
      os << ',';
      for (const auto& c : cells) {
        if (c.a == a && c.b == b) os << table_cell_text(c);
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace geofold::io
