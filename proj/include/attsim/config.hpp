#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "attsim/errors.hpp"
#include "attsim/mechanisms.hpp"
#include "attsim/netgen.hpp"

namespace attsim {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

/// Every knob of an experiment. Replication r runs with seed base_seed + r.
struct SimulationConfig {
  GenParams gen;
  MechanismParams mech;
  MechanismSchedule schedule;
  std::size_t replications = 100;
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";

  std::uint64_t seed_for(std::size_t replication) const noexcept {
    return base_seed + replication;
  }

  friend bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return a.gen.n == b.gen.n && a.gen.m == b.gen.m && a.gen.p_close == b.gen.p_close &&
           a.gen.p_mutual == b.gen.p_mutual &&
           a.mech.contagion_weight == b.mech.contagion_weight &&
           a.mech.homophily_threshold == b.mech.homophily_threshold &&
           a.mech.confounding_weight == b.mech.confounding_weight &&
           a.schedule.mode == b.schedule.mode &&
           a.schedule.p_contagion == b.schedule.p_contagion &&
           a.schedule.p_homophily == b.schedule.p_homophily &&
           a.schedule.p_confounding == b.schedule.p_confounding &&
           a.schedule.iterations == b.schedule.iterations &&
           a.schedule.snapshot_every == b.schedule.snapshot_every &&
           a.replications == b.replications && a.base_seed == b.base_seed &&
           a.output_dir == b.output_dir;
  }
};

struct ConfigKeyInfo {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

inline constexpr ConfigKeyInfo kConfigKeys[] = {
    {"n", "1000", "node count of the generated network"},
    {"m", "3", "ties per new node in preferential attachment (seed is an m-clique)"},
    {"p_close", "0.67", "probability a friendship tie spawns close-friend tie(s); "
                        "calibrated to roughly 2-6 named close friends"},
    {"p_mutual", "0.5", "probability a spawned close-friend tie is reciprocated"},
    {"contagion_weight", "0.05", "weighted-average step toward a close friend, in (0, 0.5]; "
                                 "doubled on mutual ties"},
    {"homophily_threshold", "0.8", "attitude at or above which a node counts as strong, in (0, 1)"},
    {"confounding_weight", "0.02", "weight of the shared external stimulus, in (0, 1]"},
    {"mode", "PureContagion", "PureContagion | PureHomophily | PureConfounding | Mixed"},
    {"mix_contagion", "1", "Mixed mode: per-iteration probability of contagion"},
    {"mix_homophily", "0", "Mixed mode: per-iteration probability of homophily"},
    {"mix_confounding", "0", "Mixed mode: per-iteration probability of confounding"},
    {"iterations", "50000", "mechanism steps per replication"},
    {"snapshot_every", "500", "iterations between correlation snapshots"},
    {"replications", "100", "independent runs; replication r uses seed base_seed + r"},
    {"base_seed", "1", "seed of replication 0"},
    {"output_dir", "out", "directory receiving result tables"},
};

/// Sets one key from its text value. Throws ConfigValidationError naming the
/// key when the key is unknown or the value does not parse.
inline void apply_setting(SimulationConfig& cfg, std::string_view key, std::string_view value) {
  auto bad = [&](std::string_view what) {
    return ConfigValidationError(std::string(key), std::string(what) + " '" +
                                                       std::string(value) + "'");
  };
  auto real = [&](double& dst) {
    if (!parse_number(value, dst)) throw bad("expected a real number, got");
  };
  auto count = [&](std::size_t& dst) {
    if (!parse_number(value, dst)) throw bad("expected a non-negative integer, got");
  };

  if (key == "n") count(cfg.gen.n);
  else if (key == "m") count(cfg.gen.m);
  else if (key == "p_close") real(cfg.gen.p_close);
  else if (key == "p_mutual") real(cfg.gen.p_mutual);
  else if (key == "contagion_weight") real(cfg.mech.contagion_weight);
  else if (key == "homophily_threshold") real(cfg.mech.homophily_threshold);
  else if (key == "confounding_weight") real(cfg.mech.confounding_weight);
  else if (key == "mode") {
    auto mode = parse_mode(value);
    if (!mode) throw bad("unknown mode");
    cfg.schedule.mode = *mode;
  } else if (key == "mix_contagion") real(cfg.schedule.p_contagion);
  else if (key == "mix_homophily") real(cfg.schedule.p_homophily);
  else if (key == "mix_confounding") real(cfg.schedule.p_confounding);
  else if (key == "iterations") count(cfg.schedule.iterations);
  else if (key == "snapshot_every") count(cfg.schedule.snapshot_every);
  else if (key == "replications") count(cfg.replications);
  else if (key == "base_seed") {
    if (!parse_number(value, cfg.base_seed)) throw bad("expected an unsigned 64-bit seed, got");
  } else if (key == "output_dir") cfg.output_dir = std::string(value);
  else throw ConfigValidationError(std::string(key), "unknown configuration key");
}

/// Checks cross-field invariants, naming the first offending key.
inline void validate(const SimulationConfig& cfg) {
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigValidationError(key, what);
  };
  check(cfg.gen.m >= 1, "m", "must be at least 1");
  check(cfg.gen.n > cfg.gen.m, "n", "must exceed m");
  check(cfg.gen.p_close >= 0.0 && cfg.gen.p_close <= 1.0, "p_close", "must lie in [0, 1]");
  check(cfg.gen.p_mutual >= 0.0 && cfg.gen.p_mutual <= 1.0, "p_mutual", "must lie in [0, 1]");
  check(cfg.mech.contagion_weight > 0.0 && cfg.mech.contagion_weight <= 0.5, "contagion_weight",
        "must lie in (0, 0.5]");
  check(cfg.mech.homophily_threshold > 0.0 && cfg.mech.homophily_threshold < 1.0,
        "homophily_threshold", "must lie in (0, 1)");
  check(cfg.mech.confounding_weight > 0.0 && cfg.mech.confounding_weight <= 1.0,
        "confounding_weight", "must lie in (0, 1]");
  check(cfg.schedule.snapshot_every > 0, "snapshot_every", "must be positive");
  check(cfg.replications > 0, "replications", "must be positive");
  check(!cfg.output_dir.empty(), "output_dir", "must not be empty");
  if (cfg.schedule.mode == ScheduleMode::Mixed) {
    const auto& s = cfg.schedule;
    check(s.p_contagion >= 0.0, "mix_contagion", "must be non-negative");
    check(s.p_homophily >= 0.0, "mix_homophily", "must be non-negative");
    check(s.p_confounding >= 0.0, "mix_confounding", "must be non-negative");
    check(std::abs(s.p_contagion + s.p_homophily + s.p_confounding - 1.0) <= 1e-12,
          "mix_contagion", "mixed probabilities must sum to 1");
  }
}

/// Parses `key = value` lines; `#` starts a comment. Absent keys keep their
/// defaults.
inline SimulationConfig parse_config(std::istream& in, const std::string& source = "<config>") {
  SimulationConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigSyntaxError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) {
      throw ConfigSyntaxError(source + ":" + std::to_string(lineno) + ": missing key");
    }
    apply_setting(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

inline SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in, path.string());
}

inline void write_config(std::ostream& out, const SimulationConfig& cfg) {
  out << "n = " << cfg.gen.n << '\n'
      << "m = " << cfg.gen.m << '\n'
      << "p_close = " << format_double(cfg.gen.p_close) << '\n'
      << "p_mutual = " << format_double(cfg.gen.p_mutual) << '\n'
      << "contagion_weight = " << format_double(cfg.mech.contagion_weight) << '\n'
      << "homophily_threshold = " << format_double(cfg.mech.homophily_threshold) << '\n'
      << "confounding_weight = " << format_double(cfg.mech.confounding_weight) << '\n'
      << "mode = " << to_string(cfg.schedule.mode) << '\n'
      << "mix_contagion = " << format_double(cfg.schedule.p_contagion) << '\n'
      << "mix_homophily = " << format_double(cfg.schedule.p_homophily) << '\n'
      << "mix_confounding = " << format_double(cfg.schedule.p_confounding) << '\n'
      << "iterations = " << cfg.schedule.iterations << '\n'
      << "snapshot_every = " << cfg.schedule.snapshot_every << '\n'
      << "replications = " << cfg.replications << '\n'
      << "base_seed = " << cfg.base_seed << '\n'
      << "output_dir = " << cfg.output_dir << '\n';
}

inline void save_config(const std::filesystem::path& path, const SimulationConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path.string());
  write_config(out, cfg);
}

}  // namespace attsim
