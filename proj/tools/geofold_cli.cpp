// geofold: command-line front end.
//
//   geofold mesh 2 1 -o mesh.json
//   geofold bands 5 6 --svg strip.svg
//   geofold common --s-max 20000 --csv groups.csv
//   geofold embed 3 2 --obj shape.obj --report report.json
//   geofold table --max 5 --csv table.csv --jobs 8
//   geofold --manifest run.json embed 2 2 --obj x.obj && geofold replay run.json
//
// Exit codes: 0 success, 1 runtime/IO failure, 2 usage or domain error,
// 3 a relaxation did not converge, 4 replay produced different outputs.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geofold/geofold.hpp"
#include "geofold/io.hpp"

namespace {

using geofold::Int;
using nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNotConverged = 3, kReplayMismatch = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a; only used to fingerprint output files in manifests.
std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Collects what a run produced so the manifest can list it.
struct Context {
  ordered_json parameters = ordered_json::object();
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<std::string> outputs;

  void write(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << bytes) || !out.flush()) throw std::runtime_error("cannot write " + path);
    outputs.push_back(path);
  }
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Output path for band i when several bands share one --svg argument.
std::string indexed_path(const std::string& path, std::size_t i, std::size_t n) {
  if (n == 1) return path;
  const std::filesystem::path p(path);
  std::string stem = p.stem().string() + "-" + std::to_string(i + 1);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

geofold::StripDirection parse_direction(const std::string& s) {
  if (s == "horizontal" || s == "h" || s == "0") return geofold::StripDirection::Horizontal;
  if (s == "rising" || s == "r" || s == "1") return geofold::StripDirection::Rising;
  if (s == "falling" || s == "f" || s == "2") return geofold::StripDirection::Falling;
  throw UsageError("unknown direction '" + s + "' (use horizontal, rising or falling)");
}

const char* direction_name(geofold::StripDirection d) {
  switch (d) {
    case geofold::StripDirection::Horizontal: return "horizontal";
    case geofold::StripDirection::Rising: return "rising";
    case geofold::StripDirection::Falling: return "falling";
  }
  return "?";
}

void check_pair(Int a, Int b) {
  try {
    geofold::require_valid_pair(a, b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct SolverFlags {
  geofold::RelaxConfig cfg;

  void add(CLI::App* sub) {
    sub->add_option("--restarts", cfg.restarts, "Seeded restarts per shape")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
    sub->add_option("--tolerance", cfg.tolerance, "Edge-length residual tolerance")->capture_default_str();
    sub->add_option("--max-iterations", cfg.max_iterations, "Iteration cap per relaxation")->capture_default_str();
    sub->add_option("--pressure", cfg.initial_pressure, "Initial inflation pressure")->capture_default_str();
    sub->add_option("--time-step", cfg.time_step, "Integration time step")->capture_default_str();
  }

  void record(Context& ctx) const {
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ctx.parameters["solver"] = geofold::io::config_to_json(cfg);
    ctx.seed = cfg.seed;
    ctx.has_seed = true;
  }
};

int run_mesh(Int a, Int b, const std::string& out, Context& ctx) {
  check_pair(a, b);
  ctx.parameters["a"] = a;
  ctx.parameters["b"] = b;
  const auto m = geofold::build_mesh(a, b);
  geofold::validate(m);
  const std::string json = dump(geofold::io::mesh_to_json(m));
  if (out.empty()) {
    std::cout << json;
  } else {
    ctx.write(out, json);
    std::cout << "(" << a << "," << b << ") F=" << m.face_count() << " E=" << m.edge_count()
              << " V=" << m.vertex_count() << "\n";
  }
  return kOk;
}

int run_bands(Int a, Int b, const std::string& dir_name, const std::string& svg, const std::string& json,
              double scale, Context& ctx) {
  check_pair(a, b);
  if (!(scale > 0.0)) throw UsageError("--scale must be positive");
  const auto dir = parse_direction(dir_name);
  ctx.parameters["a"] = a;
  ctx.parameters["b"] = b;
  ctx.parameters["direction"] = direction_name(dir);
  ctx.parameters["scale"] = scale;
  const auto m = geofold::build_mesh(a, b);
  const auto bands = geofold::trace_bands(m, dir);
  const std::size_t n = bands.size(), len = bands.front().size();
  std::cout << n << (n == 1 ? " band" : " bands") << " × " << len << " faces\n";
  if (!json.empty()) ctx.write(json, dump(geofold::io::bands_to_json(m, bands)));
  if (!svg.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      ctx.write(indexed_path(svg, i, n), geofold::io::strip_to_svg(geofold::unfold_band(bands[i]), scale));
    }
  }
  return kOk;
}

int run_common(Int s_max, bool non_coprime, const std::string& csv, const std::string& json, Context& ctx) {
  if (s_max < 0) throw UsageError("--s-max must be non-negative");
  ctx.parameters["s_max"] = s_max;
  ctx.parameters["include_non_coprime"] = non_coprime;
  const auto groups = geofold::enumerate_common(s_max, {.include_non_coprime = non_coprime});
  for (const auto& g : groups) {
    std::cout << "S=" << g.s << " (4*" << g.s / 4 << "):";
    for (const auto& [a, b] : g.members) std::cout << " (" << a << "," << b << ")";
    std::cout << "\n";
  }
  std::cout << groups.size() << (groups.size() == 1 ? " group\n" : " groups\n");
  if (!csv.empty()) ctx.write(csv, geofold::io::groups_to_csv(groups));
  if (!json.empty()) ctx.write(json, dump(geofold::io::groups_to_json(groups)));
  return kOk;
}

int run_embed(Int a, Int b, const SolverFlags& flags, const std::string& obj, const std::string& report,
              Context& ctx) {
  check_pair(a, b);
  ctx.parameters["a"] = a;
  ctx.parameters["b"] = b;
  flags.record(ctx);
  const auto m = geofold::build_mesh(a, b);
  geofold::MaxVolumeResult r;
  try {
    r = geofold::relax_max_volume(m, flags.cfg);
  } catch (const geofold::NonConvergenceError& e) {
    std::cerr << "geofold: " << e.what() << " (best residual " << geofold::io::format("%.3e", e.best_residual)
              << ")\n";
    return kNotConverged;
  }
  const auto& mt = r.metrics;
  std::cout << "(" << a << "," << b << ") F=" << m.face_count() << " V=" << m.vertex_count() << "\n"
            << "relative volume " << geofold::io::format("%.6f", mt.relative_volume) << "\n"
            << "volume " << geofold::io::format("%.9f", mt.volume) << "\n"
            << "residual " << geofold::io::format("%.3e", r.best.residual) << " after " << r.best.iterations
            << " iterations\n"
            << "solid angles " << geofold::io::format("%.6f", mt.min_solid_angle) << " .. "
            << geofold::io::format("%.6f", mt.max_solid_angle) << "\n"
            << "all popped " << (mt.all_popped ? "yes" : "no") << "\n";
  if (!obj.empty()) ctx.write(obj, geofold::io::embedding_to_obj(m, r.best));
  if (!report.empty()) ctx.write(report, dump(geofold::io::report_to_json(m, flags.cfg, r)));
  return kOk;
}

int run_table(Int max, const SolverFlags& flags, const std::string& csv, Context& ctx) {
  if (max < 1) throw UsageError("--max must be at least 1");
  ctx.parameters["max"] = max;
  flags.record(ctx);
  const auto cells = geofold::volume_table(max, max, flags.cfg);
  const std::string text = geofold::io::table_to_csv(cells, max, max);
  std::cout << text;
  if (!csv.empty()) ctx.write(csv, text);
  for (const auto& c : cells) {
    if (!c.converged) return kNotConverged;
  }
  return kOk;
}

ordered_json manifest_json(const std::vector<std::string>& args, const std::string& command, const Context& ctx,
                           const std::string& started, int code) {
  ordered_json j;
  j["tool"] = "geofold";
  j["version"] = geofold::kVersion;
  j["command"] = command;
  j["argv"] = args;
  j["parameters"] = ctx.parameters;
  j["seed"] = ctx.has_seed ? ordered_json(ctx.seed) : ordered_json(nullptr);
  j["started_at"] = started;
  j["finished_at"] = utc_now();
  j["exit_code"] = code;
  j["outputs"] = ordered_json::array();
  for (const auto& path : ctx.outputs) {
    const std::string bytes = read_file(path);
    j["outputs"].push_back({{"path", path}, {"bytes", bytes.size()}, {"fnv1a64", fingerprint(bytes)}});
  }
  return j;
}

int run(std::vector<std::string> args);

// Re-executes the recorded argument list and compares every recorded output.
int run_replay(const std::string& path) {
  const ordered_json m = ordered_json::parse(read_file(path));
  if (!m.contains("argv") || !m["argv"].is_array()) throw UsageError(path + ": manifest has no argv");
  const auto args = m["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw UsageError(path + ": refusing to replay a replay");
  const int code = run(args);
  if (code != m.value("exit_code", 0)) {
    std::cerr << "geofold: replay exit code " << code << " differs from recorded " << m.value("exit_code", 0)
              << "\n";
    return kReplayMismatch;
  }
  bool same = true;
  for (const auto& out : m["outputs"]) {
    const std::string p = out.at("path").get<std::string>();
    const std::string bytes = read_file(p);
    if (fingerprint(bytes) != out.at("fnv1a64").get<std::string>()) {
      std::cerr << "geofold: replay output differs: " << p << "\n";
      same = false;
    }
  }
  std::cout << "replay " << (same ? "identical" : "DIFFERENT") << " (" << m["outputs"].size() << " outputs)\n";
  return same ? kOk : kReplayMismatch;
}

int run(std::vector<std::string> args) {
  CLI::App app{"Geodesic foldings of the regular tetrahedron", "geofold"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_version_flag("--version", std::string(geofold::kVersion));
  std::string manifest;
  int jobs = 1;
  app.add_option("--manifest", manifest, "Write a run manifest (JSON) to this file");
  app.add_option("-j,--jobs", jobs, "Maximum concurrent relaxations")->check(CLI::PositiveNumber)->capture_default_str();

  Int a = 0, b = 0;
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("a", a, "First edge coordinate")->required();
    sub->add_option("b", b, "Second edge coordinate")->required();
  };

  std::string mesh_out;
  auto* mesh = app.add_subcommand("mesh", "Build the deltahedron mesh and write it as JSON");
  add_pair(mesh);
  mesh->add_option("-o,--out", mesh_out, "Output file (default: stdout)");

  std::string direction = "horizontal", svg, bands_json;
  double scale = 10.0;
  auto* bands = app.add_subcommand("bands", "Trace geodesic bands and export planar strips");
  add_pair(bands);
  bands->add_option("-d,--direction", direction, "horizontal, rising or falling")->capture_default_str();
  bands->add_option("--svg", svg, "Write strip SVG (several bands get -1, -2, ... suffixes)");
  bands->add_option("--json", bands_json, "Write band listing as JSON");
  bands->add_option("--scale", scale, "Millimetres per unit edge in SVG output")->capture_default_str();

  Int s_max = 4 * 5000;
  bool non_coprime = false;
  std::string common_csv, common_json;
  auto* common = app.add_subcommand("common", "List face counts shared by several coprime pairs");
  common->add_option("--s-max", s_max, "Largest face count to search")->capture_default_str();
  common->add_flag("--include-non-coprime", non_coprime, "Also list pairs with gcd > 1");
  common->add_option("--csv", common_csv, "Write groups as CSV");
  common->add_option("--json", common_json, "Write groups as JSON");

  SolverFlags embed_flags, table_flags;
  std::string obj, report;
  auto* embed = app.add_subcommand("embed", "Relax to the maximum-volume deltahedron");
  add_pair(embed);
  embed_flags.add(embed);
  embed->add_option("--obj", obj, "Write geometry as OBJ");
  embed->add_option("--report", report, "Write JSON report");

  Int max = 7;
  std::string table_csv;
  auto* table = app.add_subcommand("table", "Relative-volume table for 1 <= a <= b <= max");
  table->add_option("--max", max, "Largest a and b")->capture_default_str();
  table_flags.add(table);
  table->add_option("--csv", table_csv, "Write table as CSV");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and check its outputs are identical");
  replay->add_option("manifest", replay_path, "Manifest file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (replay->parsed()) {
    if (!manifest.empty()) throw UsageError("--manifest cannot be combined with replay");
    return run_replay(replay_path);
  }

  embed_flags.cfg.jobs = jobs;
  table_flags.cfg.jobs = jobs;
  Context ctx;
  const std::string started = utc_now();
  const std::string command = app.get_subcommands().front()->get_name();
  int code = kOk;
  if (mesh->parsed()) code = run_mesh(a, b, mesh_out, ctx);
  if (bands->parsed()) code = run_bands(a, b, direction, svg, bands_json, scale, ctx);
  if (common->parsed()) code = run_common(s_max, non_coprime, common_csv, common_json, ctx);
  if (embed->parsed()) code = run_embed(a, b, embed_flags, obj, report, ctx);
  if (table->parsed()) code = run_table(max, table_flags, table_csv, ctx);

  if (!manifest.empty()) {
    // The manifest replays the same command without rewriting itself.
    std::vector<std::string> replay_args;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--manifest") {
        ++i;
        continue;
      }
      if (args[i].rfind("--manifest=", 0) == 0) continue;
      replay_args.push_back(args[i]);
    }
    const std::string bytes = dump(manifest_json(replay_args, command, ctx, started, code));
    std::ofstream out(manifest, std::ios::binary);
    if (!out || !(out << bytes)) throw std::runtime_error("cannot write " + manifest);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const UsageError& e) {
    std::cerr << "geofold: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "geofold: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "geofold: " << e.what() << "\n";
    return kFailure;
  }
}
