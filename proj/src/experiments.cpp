#include "holoris/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace holoris {

namespace {

struct Task {
  std::size_t point;
  std::size_t k_index;
  int trial;
};

double record_sweep_value(const ExperimentConfig& config, double value) {
  if (config.sweep.variable == SweepVariable::RisSize) return value * value;
  return value;
}

std::vector<double> sweep_points(const ExperimentConfig& config) {
  if (config.sweep.variable == SweepVariable::None) return {0.0};
  return config.sweep.values;
}

void require_sweep(const ExperimentConfig& config, SweepVariable expected) {
  if (config.sweep.variable != expected) {
    throw ConfigError("sweep.variable", "expected '" + std::string(to_string(expected)) + "' for this experiment, got '" +
                                            std::string(to_string(config.sweep.variable)) + "'");
  }
}

// PGM-based schemes share the trial's initial phase profile.
SchemeOutcome run_scheme(SchemeId scheme, const ScenarioGeometry& geom, const ChannelSet& channels,
                         const PgmSettings& settings, const RisPhaseProfile& init) {
  switch (scheme) {
    case SchemeId::PerfectCsi: return scheme_perfect_csi(channels, settings, init);
    case SchemeId::LosCsi: return scheme_los_csi(channels, settings, init);
    case SchemeId::LocationFocus: return scheme_location_focus(geom, channels, settings);
    case SchemeId::FarField: return scheme_far_field(geom, channels, settings);
  }
  throw std::invalid_argument("unknown scheme");
}

RisPhaseProfile initial_profile(const ScenarioGeometry& geom, std::uint64_t seed, std::uint64_t trial) {
  Rng rng = derive_stream(seed, trial, StreamTag::PgmInit);
  return random_phase_profile(static_cast<Eigen::Index>(geom.ris().size()), rng);
}

std::vector<ExperimentRecord> evaluate_task(const ExperimentConfig& config, const RunOptions& options,
                                            const Task& task) {
  const double value = sweep_points(config)[task.point];
  const ScenarioGeometry geom = config.geometry_at(value);
  const ChannelParams params{config.channel.rician_k[task.k_index], config.channel.direct_pathloss_exponent,
                             config.channel.direct_blocked, config.channel.seed};
  const auto trial = static_cast<std::uint64_t>(task.trial);

  const ChannelSet channels = build_channels(geom, params, trial);
  const double erank_dir = effective_rank(unobstructed_direct(geom, params, trial));
  const RisPhaseProfile init = initial_profile(geom, params.seed, trial);

  std::vector<ExperimentRecord> out;
  for (SchemeId scheme : config.schemes) {
    const auto start = std::chrono::steady_clock::now();
    const SchemeOutcome outcome = run_scheme(scheme, geom, channels, config.optimizer, init);
    const auto stop = std::chrono::steady_clock::now();

    ExperimentRecord r;
    r.scenario = config.scenario;
    r.scheme = scheme;
    r.sweep_value = record_sweep_value(config, value);
    r.rician_k = params.rician_k;
    r.trial = task.trial;
    r.rate = outcome.rate;
    r.erank_end_to_end = effective_rank(outcome.end_to_end);
    r.erank_direct = erank_dir;
    r.wall_time_ms = options.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    r.status = outcome.status;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

void apply_overrides(ExperimentConfig& config, std::optional<std::uint64_t> seed, std::optional<int> trials) {
  if (seed) config.channel.seed = *seed;
  if (trials) {
    if (*trials < 1) throw ConfigError("--trials", "must be at least 1");
    config.channel.trials = *trials;
  }
  config.validate();
}

TrialOutcome run_trial(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial,
                       const std::vector<SchemeId>& schemes, const PgmSettings& settings) {
  TrialOutcome out;
  out.channels = build_channels(geom, params, trial);
  const RisPhaseProfile init = initial_profile(geom, params.seed, trial);
  for (SchemeId scheme : schemes) {
    out.outcomes.emplace_back(scheme, run_scheme(scheme, geom, out.channels, settings, init));
  }
  return out;
}

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  std::vector<Task> tasks;
  const auto points = sweep_points(config);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t k = 0; k < config.channel.rician_k.size(); ++k) {
      const int trials = config.trials_for(config.channel.rician_k[k]);
      for (int t = 0; t < trials; ++t) tasks.push_back({p, k, t});
    }
  }

  std::vector<std::vector<ExperimentRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = evaluate_task(config, options, tasks[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRecord> records;
  for (auto& batch : results) {
    for (auto& r : batch) records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.scheme, a.sweep_value, a.rician_k, a.trial) < std::tie(b.scheme, b.sweep_value, b.rician_k, b.trial);
  });
  return records;
}

std::vector<ExperimentRecord> run_rate_vs_ris_size(const ExperimentConfig& config, const RunOptions& options) {
  require_sweep(config, SweepVariable::RisSize);
  return run_sweep(config, options);
}

std::vector<ExperimentRecord> run_dof_vs_distance(const ExperimentConfig& config, const RunOptions& options) {
  require_sweep(config, SweepVariable::WallDistance);
  return run_sweep(config, options);
}

std::vector<ExperimentRecord> run_dof_vs_ris_position(const ExperimentConfig& config, const RunOptions& options) {
  require_sweep(config, SweepVariable::RisOffset);
  return run_sweep(config, options);
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

bool any_unconverged(const std::vector<ExperimentRecord>& records) {
  return std::any_of(records.begin(), records.end(),
                     [](const ExperimentRecord& r) { return r.status != PgmStatus::Converged; });
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  const bool with_status = any_unconverged(records);
  out << kRecordCsvHeader << (with_status ? ",status" : "") << '\n';
  for (const auto& r : records) {
    out << r.scenario << ',' << to_string(r.scheme) << ',' << format_double(r.sweep_value) << ','
        << format_double(r.rician_k) << ',' << r.trial << ',' << format_double(r.rate) << ','
        << format_double(r.erank_end_to_end) << ',' << format_double(r.erank_direct) << ','
        << format_double(r.wall_time_ms);
    if (with_status) out << ',' << (r.status == PgmStatus::Converged ? "converged" : "iteration_limit");
    out << '\n';
  }
}

ModesResult run_modes(const ExperimentConfig& config) {
  if (config.sweep.variable != SweepVariable::None) {
    throw ConfigError("sweep.variable", "the modes experiment needs a single geometry point (variable 'none')");
  }
  config.validate();
  const ScenarioGeometry geom = config.base_geometry();
  const Eigen::Index available = std::min<Eigen::Index>(geom.rx().size(), geom.tx().size());
  if (config.modes.count > available) {
    throw ConfigError("modes.count", "exceeds the " + std::to_string(available) + " available modes");
  }
  const ChannelParams params{config.channel.rician_k.front(), config.channel.direct_pathloss_exponent,
                             config.channel.direct_blocked, config.channel.seed};
  TrialOutcome trial = run_trial(geom, params, 0, {config.modes.scheme}, config.optimizer);
  const SchemeOutcome& outcome = trial.outcomes.front().second;
  auto modes = mode_fields(trial.channels.h, outcome.end_to_end, config.optimizer.power_budget,
                           config.optimizer.noise_power, config.modes.count);
  return ModesResult{geom, config.modes.scheme, params.rician_k, std::move(modes)};
}

void write_modes_csv(std::ostream& out, const ModesResult& result) {
  const auto count = result.modes.size();
  out << "cell,ix,iy,x_m,y_m";
  for (std::size_t i = 1; i <= count; ++i) out << ",abs_w" << i;
  for (std::size_t i = 1; i <= count; ++i) out << ",phase_w" << i;
  out << '\n';
  const SurfaceSpec& ris = result.geometry.ris();
  for (std::size_t n = 0; n < ris.size(); ++n) {
    const auto [ix, iy] = element_axes(Surface::Ris, ris, n);
    const Vec3 p = element_position(result.geometry, Surface::Ris, n);
    out << n << ',' << ix << ',' << iy << ',' << format_double(p.x()) << ',' << format_double(p.y());
    const auto cell = static_cast<Eigen::Index>(n);
    for (const auto& m : result.modes) out << ',' << format_double(std::abs(m.values(cell)));
    for (const auto& m : result.modes) out << ',' << format_double(std::arg(m.values(cell)) / std::numbers::pi);
    out << '\n';
  }
}

void write_modes_meta_csv(std::ostream& out, const ModesResult& result) {
  out << "mode,singular_value,power_w\n";
  for (const auto& m : result.modes) {
    out << (m.mode_index + 1) << ',' << format_double(m.singular_value) << ',' << format_double(m.power) << '\n';
  }
}

}  // namespace holoris
