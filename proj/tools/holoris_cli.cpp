// Experiment driver: runs the sweeps and writes CSV results.
//
// Exit codes: 0 success, 2 configuration error, 3 some PGM run hit its
// iteration limit (results are still written), 1 any other failure.

#include "holoris/channel_dump.hpp"
#include "holoris/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitUnconverged = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int threads = 1;
  bool record_timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output CSV path")->required();
  cmd->add_option("--seed", args.seed, "Override the master seed");
  cmd->add_option("--trials", args.trials, "Override the trial count for every K")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
}

holoris::ExperimentConfig load(const CommonArgs& args) {
  holoris::ExperimentConfig config = holoris::load_config(args.config);
  holoris::apply_overrides(config, args.seed, args.trials);
  return config;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

int run_records(const CommonArgs& args, holoris::SweepVariable variable) {
  const holoris::ExperimentConfig config = load(args);
  const holoris::RunOptions options{args.threads, args.record_timing};
  std::vector<holoris::ExperimentRecord> records;
  switch (variable) {
    case holoris::SweepVariable::RisSize: records = holoris::run_rate_vs_ris_size(config, options); break;
    case holoris::SweepVariable::WallDistance: records = holoris::run_dof_vs_distance(config, options); break;
    case holoris::SweepVariable::RisOffset: records = holoris::run_dof_vs_ris_position(config, options); break;
    case holoris::SweepVariable::None: throw std::logic_error("sweep variable required");
  }
  auto out = open_output(args.out);
  holoris::write_records_csv(out, records);
  std::cerr << "wrote " << records.size() << " records to " << args.out << '\n';
  if (holoris::any_unconverged(records)) {
    std::cerr << "warning: at least one optimizer run hit the iteration limit\n";
    return kExitUnconverged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided holographic MIMO rate and DoF experiments"};
  app.require_subcommand(1);

  CommonArgs rate_args, distance_args, position_args, modes_args, dump_args;
  std::string meta_out;
  std::uint64_t dump_trial = 0;
  std::optional<double> dump_k;

  auto* rate = app.add_subcommand("rate-vs-n", "Achievable rate versus RIS size");
  add_common(rate, rate_args);
  rate->add_flag("--record-timing", rate_args.record_timing, "Write measured wall times (breaks byte determinism)");

  auto* distance = app.add_subcommand("dof-vs-distance", "Effective rank versus wall distance");
  add_common(distance, distance_args);
  distance->add_flag("--record-timing", distance_args.record_timing, "Write measured wall times");

  auto* position = app.add_subcommand("dof-vs-ris-position", "Effective rank versus RIS offset");
  add_common(position, position_args);
  position->add_flag("--record-timing", position_args.record_timing, "Write measured wall times");

  auto* modes = app.add_subcommand("modes", "Communication modes observed at the RIS");
  add_common(modes, modes_args);
  modes->add_option("--meta-out", meta_out, "Optional CSV with singular value and power per mode");

  auto* dump = app.add_subcommand("dump-channels", "Binary dump of one trial's channel matrices");
  add_common(dump, dump_args);
  dump->add_option("--trial", dump_trial, "Trial index");
  dump->add_option("--k", dump_k, "Rician factor (default: first configured value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*rate) return run_records(rate_args, holoris::SweepVariable::RisSize);
    if (*distance) return run_records(distance_args, holoris::SweepVariable::WallDistance);
    if (*position) return run_records(position_args, holoris::SweepVariable::RisOffset);
    if (*modes) {
      const auto config = load(modes_args);
      const auto result = holoris::run_modes(config);
      auto out = open_output(modes_args.out);
      holoris::write_modes_csv(out, result);
      if (!meta_out.empty()) {
        auto meta = open_output(meta_out);
        holoris::write_modes_meta_csv(meta, result);
      }
      return 0;
    }
    if (*dump) {
      const auto config = load(dump_args);
      const holoris::ChannelParams params{dump_k.value_or(config.channel.rician_k.front()),
                                          config.channel.direct_pathloss_exponent, config.channel.direct_blocked,
                                          config.channel.seed};
      const auto channels = holoris::build_channels(config.base_geometry(), params, dump_trial);
      auto out = open_output(dump_args.out);
      holoris::write_channel_dump(out, channels);
      return 0;
    }
  } catch (const holoris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
