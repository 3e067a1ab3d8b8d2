#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/field.hpp"
#include "fluxdiff/fluxes.hpp"
#include "fluxdiff/operators.hpp"

namespace fluxdiff::harness {

enum class MeshKind { cartesian, curved };
enum class InitialCondition { isentropic_vortex, sinusoidal, random, free_stream };

inline std::string to_string(MeshKind m) { return m == MeshKind::cartesian ? "cartesian" : "curved"; }

inline std::string to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::isentropic_vortex: return "isentropic_vortex";
    case InitialCondition::sinusoidal: return "sinusoidal";
    case InitialCondition::random: return "random";
    case InitialCondition::free_stream: return "free_stream";
  }
  return "?";
}

struct RunConfig {
  int dim = 2;
  int degree = 3;
  int elements = 8;  // per coordinate direction
  MeshKind mesh = MeshKind::cartesian;
  double amplitude = -1.0;  // curved mesh perturbation in units of h; < 0 picks elements / (4 pi dim)
  RhsConfig rhs;
  InitialCondition ic = InitialCondition::isentropic_vortex;
  double epsilon = 20.0;
  std::uint64_t seed = 1;
  double gamma = 1.4;
  double cfl = 0.5;
  long n_steps = -1;
  double t_end = -1.0;
  std::string output = ".";
  int repeats = 5;                     // pid runs
  bool monitor = true;                 // entropy monitor during `run`
  std::vector<int> levels{4, 8, 16};   // convergence meshes
  std::vector<std::string> fluxes{"shima_etal", "ranocha_ec"};  // microbench
  long samples = 200000;               // microbench pairs per repeat

  NodeFamily family() const { return is_gauss_scheme(rhs.volume_scheme) ? NodeFamily::gauss : NodeFamily::lgl; }
  double mesh_amplitude(int n) const { return amplitude >= 0.0 ? amplitude : n / (4.0 * std::numbers::pi * dim); }
  long effective_steps() const { return n_steps < 0 && t_end < 0.0 ? 90 : n_steps; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": cannot parse '" + value + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Re-throws parse errors from enum helpers with the key in front.
template <typename F>
auto with_key(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace detail

inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string v = trim(raw);
  if (key == "dim") c.dim = parse_number<int>(key, v);
  else if (key == "degree") c.degree = parse_number<int>(key, v);
  else if (key == "elements") c.elements = parse_number<int>(key, v);
  else if (key == "mesh") {
    if (v == "cartesian") c.mesh = MeshKind::cartesian;
    else if (v == "curved") c.mesh = MeshKind::curved;
    else throw ConfigError("mesh: expected cartesian or curved, got '" + v + "'");
  } else if (key == "amplitude") c.amplitude = parse_number<double>(key, v);
  else if (key == "scheme" || key == "volume_scheme") c.rhs.volume_scheme = with_key(key, [&] { return volume_scheme_from_string(v); });
  else if (key == "volume_flux") c.rhs.volume_flux = with_key(key, [&] { return flux_kind_from_string(v); });
  else if (key == "surface_flux") c.rhs.surface_flux = with_key(key, [&] { return flux_kind_from_string(v); });
  else if (key == "precompute") c.rhs.precompute = with_key(key, [&] { return precompute_from_string(v); });
  else if (key == "overintegration_degree") c.rhs.overintegration_degree = parse_number<int>(key, v);
  else if (key == "batched") c.rhs.batched = parse_bool(key, v);
  else if (key == "batch_width") c.rhs.batch_width = parse_number<int>(key, v);
  else if (key == "threads") c.rhs.threads = parse_number<int>(key, v);
  else if (key == "ic") {
    bool found = false;
    for (auto ic : {InitialCondition::isentropic_vortex, InitialCondition::sinusoidal, InitialCondition::random,
                    InitialCondition::free_stream})
      if (v == to_string(ic)) {
        c.ic = ic;
        found = true;
      }
    if (!found) throw ConfigError("ic: unknown initial condition '" + v + "'");
  } else if (key == "epsilon") c.epsilon = parse_number<double>(key, v);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "gamma") c.gamma = parse_number<double>(key, v);
  else if (key == "cfl") c.cfl = parse_number<double>(key, v);
  else if (key == "n_steps") c.n_steps = parse_number<long>(key, v);
  else if (key == "t_end") c.t_end = parse_number<double>(key, v);
  else if (key == "output") c.output = v;
  else if (key == "repeats") c.repeats = parse_number<int>(key, v);
  else if (key == "monitor") c.monitor = parse_bool(key, v);
  else if (key == "levels") {
    c.levels.clear();
    for (const auto& s : split_list(v)) c.levels.push_back(parse_number<int>(key, s));
  } else if (key == "fluxes") c.fluxes = split_list(v);
  else if (key == "samples") c.samples = parse_number<long>(key, v);
  else throw ConfigError("unknown key '" + key + "'");
}

// "key=value" as given on the command line.
inline void apply_assignment(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  apply_setting(c, detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

// Flat key = value lines; '#' starts a comment.
inline void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline void validate(const RunConfig& c) {
  if (c.dim != 2 && c.dim != 3) throw ConfigError("dim: must be 2 or 3, got " + std::to_string(c.dim));
  if (c.degree < 1 || c.degree > kMaxDegree) {
    throw ConfigError("degree: must be in [1, " + std::to_string(kMaxDegree) + "], got " + std::to_string(c.degree));
  }
  if (c.elements < 1) throw ConfigError("elements: must be positive");
  if (c.mesh == MeshKind::curved && c.elements < 2) throw ConfigError("elements: curved meshes need at least 2");
  if (!(c.gamma > 1.0)) throw ConfigError("gamma: must exceed 1");
  if (!(c.cfl > 0.0)) throw ConfigError("cfl: must be positive");
  if (c.n_steps >= 0 && c.t_end >= 0.0) throw ConfigError("n_steps: set either n_steps or t_end, not both");
  if (c.repeats < 1) throw ConfigError("repeats: must be positive");
  if (c.samples < 1) throw ConfigError("samples: must be positive");
  if (c.rhs.threads < 1) throw ConfigError("threads: must be positive");
  if (c.rhs.volume_scheme == VolumeScheme::overintegration && c.mesh == MeshKind::curved) {
    throw ConfigError("scheme: overintegration is implemented for Cartesian meshes only");
  }
  if (c.levels.empty()) throw ConfigError("levels: at least one mesh level required");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (c.levels[i] < 1 || (i > 0 && c.levels[i] <= c.levels[i - 1])) {
      throw ConfigError("levels: must be positive and strictly increasing");
    }
  }
  for (const auto& f : c.fluxes) detail::with_key("fluxes", [&] { return flux_kind_from_string(f); });
  detail::with_key("scheme", [&] {
    validate_config(c.rhs, c.family(), c.degree);
    return 0;
  });
}

inline std::string describe(const RunConfig& c) {
  std::ostringstream s;
  s << "dim=" << c.dim << " degree=" << c.degree << " elements=" << c.elements << " mesh=" << to_string(c.mesh)
    << " scheme=" << fluxdiff::to_string(c.rhs.volume_scheme) << " volume_flux=" << fluxdiff::to_string(c.rhs.volume_flux)
    << " surface_flux=" << fluxdiff::to_string(c.rhs.surface_flux) << " ic=" << to_string(c.ic);
  return s.str();
}

}  // namespace fluxdiff::harness
