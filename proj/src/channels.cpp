#include "holoris/channels.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holoris {

namespace {

using cd = std::complex<double>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Free-space link from a surface element to a RIS cell; height is the
// element's distance from the RIS plane, i.e. its z coordinate.
cd surface_to_cell(double gain, double area, double k0, const Vec3& element, const Vec3& cell) {
  const double dist = exact_distance(element, cell);
  const double cos_angle = element.z() / dist;
  if (!(cos_angle > 0.0)) {
    throw std::domain_error("surface element at or below the RIS plane (cos gamma <= 0)");
  }
  const double amplitude = std::sqrt(gain * area / (4.0 * std::numbers::pi) * cos_angle / (dist * dist));
  return std::polar(amplitude, k0 * dist);
}

}  // namespace

void ChannelParams::validate() const {
  if (!(rician_k >= 0.0)) throw std::invalid_argument("rician_k must be nonnegative");
  if (!(direct_pathloss_exp >= 2.0)) throw std::invalid_argument("direct_pathloss_exp must be at least 2");
}

Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamTag tag) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ trial);
  s = splitmix64(s ^ static_cast<std::uint64_t>(tag));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

Eigen::MatrixXcd los_tx_to_ris(const ScenarioGeometry& geom) {
  const auto tx = element_positions(geom, Surface::Tx);
  const auto ris = element_positions(geom, Surface::Ris);
  const double gain = geom.tx().element_gain;
  const double area = geom.ris().element_area();
  const double k0 = geom.wavenumber();
  Eigen::MatrixXcd out(ris.size(), tx.size());
  for (std::size_t l = 0; l < tx.size(); ++l) {
    for (std::size_t n = 0; n < ris.size(); ++n) {
      out(n, l) = surface_to_cell(gain, area, k0, tx[l], ris[n]);
    }
  }
  return out;
}

Eigen::MatrixXcd los_ris_to_rx(const ScenarioGeometry& geom) {
  const auto rx = element_positions(geom, Surface::Rx);
  const auto ris = element_positions(geom, Surface::Ris);
  const double gain = geom.rx().element_gain;
  const double area = geom.ris().element_area();
  const double k0 = geom.wavenumber();
  Eigen::MatrixXcd out(rx.size(), ris.size());
  for (std::size_t n = 0; n < ris.size(); ++n) {
    for (std::size_t m = 0; m < rx.size(); ++m) {
      out(m, n) = surface_to_cell(gain, area, k0, rx[m], ris[n]);
    }
  }
  return out;
}

Eigen::MatrixXcd los_direct(const ScenarioGeometry& geom, const ChannelParams& params) {
  const auto tx = element_positions(geom, Surface::Tx);
  const auto rx = element_positions(geom, Surface::Rx);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rx.size(), tx.size());
  if (params.direct_blocked) return out;
  const double lambda = geom.wavelength();
  const double k0 = geom.wavenumber();
  const double four_pi = 4.0 * std::numbers::pi;
  const double numerator = geom.tx().element_gain * geom.rx().element_gain * lambda * lambda / (four_pi * four_pi);
  for (std::size_t l = 0; l < tx.size(); ++l) {
    for (std::size_t m = 0; m < rx.size(); ++m) {
      const double dist = exact_distance(tx[l], rx[m]);
      const double amplitude = std::sqrt(numerator / std::pow(dist, params.direct_pathloss_exp));
      out(m, l) = std::polar(amplitude, k0 * dist);
    }
  }
  return out;
}

Eigen::MatrixXcd draw_nlos(const Eigen::MatrixXcd& los, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd out(los.rows(), los.cols());
  for (Eigen::Index r = 0; r < los.rows(); ++r) {
    for (Eigen::Index c = 0; c < los.cols(); ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = std::abs(los(r, c)) * scale * cd(re, im);
    }
  }
  return out;
}

Eigen::MatrixXcd assemble_rician(const Eigen::MatrixXcd& los, const Eigen::MatrixXcd& nlos, double rician_k) {
  if (los.rows() != nlos.rows() || los.cols() != nlos.cols()) {
    throw std::invalid_argument("assemble_rician: LoS and NLoS shapes differ");
  }
  if (!(rician_k >= 0.0)) throw std::invalid_argument("assemble_rician: rician_k must be nonnegative");
  const double los_weight = std::sqrt(rician_k / (rician_k + 1.0));
  const double nlos_weight = std::sqrt(1.0 / (rician_k + 1.0));
  return los_weight * los + nlos_weight * nlos;
}

Eigen::MatrixXcd unobstructed_direct(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial) {
  ChannelParams open = params;
  open.direct_blocked = false;
  const Eigen::MatrixXcd los = los_direct(geom, open);
  Rng rng = derive_stream(params.seed, trial, StreamTag::Direct);
  return assemble_rician(los, draw_nlos(los, rng), params.rician_k);
}

ChannelSet build_channels(const ScenarioGeometry& geom, const ChannelParams& params, std::uint64_t trial) {
  params.validate();
  ChannelSet set;
  set.h_los = los_tx_to_ris(geom);
  set.g_los = los_ris_to_rx(geom);
  set.h_dir_los = los_direct(geom, params);

  Rng h_rng = derive_stream(params.seed, trial, StreamTag::TxToRis);
  Rng g_rng = derive_stream(params.seed, trial, StreamTag::RisToRx);
  Rng d_rng = derive_stream(params.seed, trial, StreamTag::Direct);
  set.h = assemble_rician(set.h_los, draw_nlos(set.h_los, h_rng), params.rician_k);
  set.g = assemble_rician(set.g_los, draw_nlos(set.g_los, g_rng), params.rician_k);
  set.h_dir = assemble_rician(set.h_dir_los, draw_nlos(set.h_dir_los, d_rng), params.rician_k);
  return set;
}

}  // namespace holoris
