#pragma once

#include "holoris/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace holoris {

struct ChannelParams {
  double rician_k = 0.0;              // K = 0 is pure Rayleigh
  double direct_pathloss_exp = 2.0;   // alpha_dir
  bool direct_blocked = false;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Combined Rician channels and their deterministic LoS parts.
//   h: N x L (Tx -> RIS), g: M x N (RIS -> Rx), h_dir: M x L (Tx -> Rx)
struct ChannelSet {
  Eigen::MatrixXcd h;
  Eigen::MatrixXcd g;
  Eigen::MatrixXcd h_dir;
  Eigen::MatrixXcd h_los;
  Eigen::MatrixXcd g_los;
  Eigen::MatrixXcd h_dir_los;
};

// Named random streams. Each (master seed, trial, tag) triple maps to an
// independent generator, so trials can run in any order.
enum class StreamTag : std::uint64_t {
  TxToRis = 1,
  RisToRx = 2,
  Direct = 3,
  PgmInit = 4,
};

using Rng = std::mt19937_64;

Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamTag tag);

Eigen::MatrixXcd los_tx_to_ris(const ScenarioGeometry& geom);
Eigen::MatrixXcd los_ris_to_rx(const ScenarioGeometry& geom);
Eigen::MatrixXcd los_direct(const ScenarioGeometry& geom, const ChannelParams& params);

// |los| scaled by i.i.d. CN(0,1) samples, drawn row by row.
Eigen::MatrixXcd draw_nlos(const Eigen::MatrixXcd& los, Rng& rng);

// sqrt(K/(K+1)) los + sqrt(1/(K+1)) nlos
Eigen::MatrixXcd assemble_rician(const Eigen::MatrixXcd& los, const Eigen::MatrixXcd& nlos, double rician_k);

// Rician direct link drawn from the trial's direct stream, ignoring the
// blocked flag. build_channels uses the same draw when the link is open.
Eigen::MatrixXcd unobstructed_direct(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial);

ChannelSet build_channels(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial);

}  // namespace holoris
