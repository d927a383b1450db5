#pragma once

#include <map>
#include <string>
#include <vector>

#include "quadsmc/controller.hpp"
#include "quadsmc/sim.hpp"

namespace quadsmc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat "section.key = value" store. Native format is sectioned
/// key-value text with '#' comments; JSON (one level of nesting =
/// section) is accepted as an alternative. Keys keep their source line
/// for diagnostics.
class Config {
 public:
  static Config parse(const std::string& text,
                      const std::string& origin = "<string>");
  static Config parse_json(const std::string& text,
                           const std::string& origin = "<string>");
  /// Dispatches on a .json extension.
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value, int line = 0);
  /// "section.key=value" command-line override.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;

  /// Canonical sorted key-value text; reparsing reproduces the config.
  std::string snapshot() const;
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Throws ConfigError naming the first key not in `known`.
  void check_known(const std::vector<std::string>& known) const;
  /// Context string "origin:line" for a key, for error messages.
  std::string where(const std::string& key) const;

 private:
  std::string origin_ = "<string>";
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

/// Applies the recognized sections (vehicle, sim, wind, attitude,
/// position, adapt_q, adapt_xi, init, esmc, gtc, qpd, qpd_position) on
/// top of the given structs. Rejects unknown keys.
void apply_config(const Config& c, VehicleParams* vp, SimConfig* sim,
                  ControllerGains* g, DisturbanceModel* dist);

/// Reproducibility manifest written next to run artifacts (JSON).
std::string make_manifest(const std::string& command,
                          const std::string& config_path, const Config& config,
                          std::uint64_t seed, const std::string& out_dir);

inline constexpr const char* kToolVersion = "quadsmc 1.0.0";

}  // namespace quadsmc
