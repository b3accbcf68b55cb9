#pragma once

#include "holoris/channels.hpp"
#include "holoris/geometry.hpp"
#include "holoris/optimizer.hpp"
#include "holoris/schemes.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holoris {

// Thrown for any invalid or unknown configuration entry. `path` is the dotted
// location of the offending field, e.g. "geometry.ris_offset_m".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class SweepVariable { None, RisSize, WallDistance, RisOffset };

std::string_view to_string(SweepVariable v);

struct HoloSurfaceConfig {
  int count_y = 8;
  int count_z = 8;
  double gain_dbi = 3.0;
};

struct GeometryConfig {
  double wall_distance_m = 15.0;
  // Exactly one of the two is set; the fraction is relative to the wall distance.
  std::optional<double> ris_offset_m;
  std::optional<double> ris_offset_fraction = 0.5;
  double tx_height_m = 2.0;
  double rx_height_m = 2.0;
  double frequency_hz = 3.5e9;
  HoloSurfaceConfig tx;
  HoloSurfaceConfig rx;
  int ris_count_x = 50;
  int ris_count_y = 50;
};

struct ChannelConfig {
  std::vector<double> rician_k{1.0, 10.0, 100000.0};
  double direct_pathloss_exponent = 3.0;
  bool direct_blocked = true;
  std::uint64_t seed = 1;
  std::optional<int> trials;  // default: 50 for K < 1000, 1 otherwise
};

struct SweepConfig {
  SweepVariable variable = SweepVariable::None;
  std::vector<double> values;  // ris_size values are side lengths (N = v^2)
};

struct PowerConfig {
  double tx_power_dbm = -10.0;
  double noise_psd_dbm_per_hz = -170.0;
  double bandwidth_hz = 20e6;
};

struct ModesConfig {
  int count = 6;
  SchemeId scheme = SchemeId::PerfectCsi;
};

struct ExperimentConfig {
  std::string scenario = "scenario";
  GeometryConfig geometry;
  ChannelConfig channel;
  std::vector<SchemeId> schemes{SchemeId::PerfectCsi, SchemeId::LosCsi, SchemeId::LocationFocus, SchemeId::FarField};
  SweepConfig sweep;
  PowerConfig power;
  PgmSettings optimizer;  // noise_power and power_budget derived from `power`
  ModesConfig modes;

  // Linear quantities, converted once at load.
  double tx_power_w() const;
  double noise_power_w() const;

  int trials_for(double rician_k) const;

  // Geometry at one sweep point (ignored when the sweep variable is None).
  ScenarioGeometry geometry_at(double sweep_value) const;
  ScenarioGeometry base_geometry() const;

  // Re-checks cross-field invariants; throws ConfigError.
  void validate() const;
};

double dbm_to_watts(double dbm);

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace holoris
