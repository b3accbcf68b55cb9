#pragma once

#include "holoris/config.hpp"
#include "holoris/metrics.hpp"
#include "holoris/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace holoris {

struct ExperimentRecord {
  std::string scenario;
  SchemeId scheme = SchemeId::PerfectCsi;
  double sweep_value = 0.0;  // N for ris_size sweeps, meters otherwise
  double rician_k = 0.0;
  int trial = 0;
  double rate = 0.0;         // bits/s/Hz
  double erank_end_to_end = 0.0;
  double erank_direct = 0.0;  // direct link as if unobstructed
  double wall_time_ms = 0.0;
  PgmStatus status = PgmStatus::Converged;
};

struct RunOptions {
  int threads = 1;
  // Wall time varies between runs; it is written as 0 unless requested so
  // that identical configs give identical files.
  bool record_timing = false;
};

// Applies CLI overrides and re-validates.
void apply_overrides(ExperimentConfig& config, std::optional<std::uint64_t> seed, std::optional<int> trials);

// Runs every (sweep point, K, trial, scheme) combination. Records are sorted
// by (scheme, sweep_value, K, trial).
std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

// Each of these checks that the config sweeps the matching variable.
std::vector<ExperimentRecord> run_rate_vs_ris_size(const ExperimentConfig& config, const RunOptions& options = {});
std::vector<ExperimentRecord> run_dof_vs_distance(const ExperimentConfig& config, const RunOptions& options = {});
std::vector<ExperimentRecord> run_dof_vs_ris_position(const ExperimentConfig& config,
                                                      const RunOptions& options = {});

// One (geometry, K, trial) evaluation, shared by the sweeps and tests.
struct TrialOutcome {
  ChannelSet channels;
  std::vector<std::pair<SchemeId, SchemeOutcome>> outcomes;
};
TrialOutcome run_trial(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial,
                       const std::vector<SchemeId>& schemes, const PgmSettings& settings);

inline constexpr const char* kRecordCsvHeader =
    "scenario,scheme,sweep_value,K,trial,rate_bpshz,erank_e2e,erank_dir,wall_time_ms";

// Appends a status column when any record hit the iteration limit.
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
bool any_unconverged(const std::vector<ExperimentRecord>& records);

struct ModesResult {
  ScenarioGeometry geometry;
  SchemeId scheme;
  double rician_k;
  std::vector<ModeField> modes;
};

// Modes of the first K value, trial 0, at the unswept geometry.
ModesResult run_modes(const ExperimentConfig& config);

// One row per RIS cell: cell,ix,iy,x_m,y_m,abs_w1..abs_wk,phase_w1..phase_wk
// (phase in units of pi).
void write_modes_csv(std::ostream& out, const ModesResult& result);
// One row per mode: mode,singular_value,power_w
void write_modes_meta_csv(std::ostream& out, const ModesResult& result);

std::string format_double(double value);  // 9 significant digits

}  // namespace holoris
