#include "holoris/schemes.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace holoris {

namespace {

constexpr std::array<std::pair<SchemeId, std::string_view>, 4> kSchemeNames{{
    {SchemeId::PerfectCsi, "perfect_csi"},
    {SchemeId::LosCsi, "los_csi"},
    {SchemeId::LocationFocus, "location_focus"},
    {SchemeId::FarField, "far_field"},
}};

LinkMatrices combined_links(const ChannelSet& c) { return {c.h_dir, c.h, c.g}; }
LinkMatrices los_links(const ChannelSet& c) { return {c.h_dir_los, c.h_los, c.g_los}; }

template <typename DistanceFn>
RisPhaseProfile compensating_profile(const ScenarioGeometry& geom, DistanceFn distances) {
  const double k0 = geom.wavenumber();
  const double d_dir = direct_center_distance(geom);
  const std::size_t n_cells = geom.ris().size();
  Eigen::VectorXd phases(static_cast<Eigen::Index>(n_cells));
  for (std::size_t n = 0; n < n_cells; ++n) {
    const auto [d1, d2] = distances(geom, n);
    phases(static_cast<Eigen::Index>(n)) = k0 * (d_dir - d1 - d2);
  }
  return RisPhaseProfile(std::move(phases));  // wraps to [-pi, pi]
}

}  // namespace

std::string_view to_string(SchemeId id) {
  for (const auto& [key, name] : kSchemeNames) {
    if (key == id) return name;
  }
  return "unknown";
}

std::optional<SchemeId> scheme_from_string(std::string_view name) {
  for (const auto& [key, text] : kSchemeNames) {
    if (text == name) return key;
  }
  return std::nullopt;
}

WaterFilling water_filling_modes(const Eigen::MatrixXcd& h_eff, double power_budget, double noise_power) {
  if (!(power_budget > 0.0)) throw std::invalid_argument("water_filling: power budget must be positive");
  if (!(noise_power > 0.0)) throw std::invalid_argument("water_filling: noise power must be positive");
  if (h_eff.size() == 0 || h_eff.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("water_filling: channel is zero");
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(h_eff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  WaterFilling out;
  out.singular_values = svd.singularValues();
  out.right_vectors = svd.matrixV();
  const Eigen::Index modes = out.singular_values.size();

  // Inverse mode gains noise / s_k^2, ascending because s_k is descending.
  Eigen::VectorXd floor(modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    const double s = out.singular_values(k);
    floor(k) = s > 0.0 ? noise_power / (s * s) : std::numeric_limits<double>::infinity();
  }

  // Largest active set whose water level clears its weakest mode.
  double level = 0.0;
  double cumulative = 0.0;
  for (Eigen::Index k = 0; k < modes; ++k) {
    if (!std::isfinite(floor(k))) break;
    cumulative += floor(k);
    const double candidate = (power_budget + cumulative) / static_cast<double>(k + 1);
    if (candidate > floor(k)) {
      level = candidate;
    } else {
      break;
    }
  }
  out.water_level = level;
  out.powers = (level - floor.array()).cwiseMax(0.0).matrix();
  for (Eigen::Index k = 0; k < modes; ++k) {
    if (!std::isfinite(floor(k))) out.powers(k) = 0.0;
  }
  const Eigen::MatrixXcd& v = out.right_vectors;
  Eigen::MatrixXcd q = v * out.powers.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  out.q.q = 0.5 * (q + q.adjoint());
  return out;
}

TransmitCovariance water_filling(const Eigen::MatrixXcd& h_eff, double power_budget, double noise_power) {
  return water_filling_modes(h_eff, power_budget, noise_power).q;
}

RisPhaseProfile focus_phase_profile(const ScenarioGeometry& geom) {
  return compensating_profile(geom, focus_distances);
}

RisPhaseProfile far_field_phase_profile(const ScenarioGeometry& geom) {
  return compensating_profile(geom, farfield_distances);
}

SchemeOutcome evaluate_with_water_filling(const ChannelSet& channels, const RisPhaseProfile& theta,
                                          const PgmSettings& settings) {
  SchemeOutcome out;
  out.theta = theta;
  out.end_to_end = end_to_end(combined_links(channels), theta.reflection());
  out.q = water_filling(out.end_to_end, settings.power_budget, settings.noise_power);
  out.rate = log_det_rate(out.end_to_end, out.q.q, settings.noise_power);
  return out;
}

SchemeOutcome scheme_perfect_csi(const ChannelSet& channels, const PgmSettings& settings,
                                 const RisPhaseProfile& init_theta) {
  const LinkMatrices links = combined_links(channels);
  PgmResult solved = pgm_solve(links, settings, init_theta,
                               TransmitCovariance::isotropic(links.transmit_size(), settings.power_budget));
  SchemeOutcome out;
  out.theta = solved.theta;
  out.q = solved.q;
  out.end_to_end = end_to_end(links, out.theta.reflection());
  out.rate = log_det_rate(out.end_to_end, out.q.q, settings.noise_power);
  out.status = solved.status;
  out.iterations = static_cast<int>(solved.trace.iterations.size()) - 1;
  return out;
}

SchemeOutcome scheme_los_csi(const ChannelSet& channels, const PgmSettings& settings,
                             const RisPhaseProfile& init_theta) {
  const LinkMatrices links = los_links(channels);
  // Only the phase profile survives; the covariance found here is discarded.
  PgmResult solved = pgm_solve(links, settings, init_theta,
                               TransmitCovariance::isotropic(links.transmit_size(), settings.power_budget));
  SchemeOutcome out = evaluate_with_water_filling(channels, solved.theta, settings);
  out.status = solved.status;
  out.iterations = static_cast<int>(solved.trace.iterations.size()) - 1;
  return out;
}

SchemeOutcome scheme_location_focus(const ScenarioGeometry& geom, const ChannelSet& channels,
                                    const PgmSettings& settings) {
  return evaluate_with_water_filling(channels, focus_phase_profile(geom), settings);
}

SchemeOutcome scheme_far_field(const ScenarioGeometry& geom, const ChannelSet& channels,
                               const PgmSettings& settings) {
  return evaluate_with_water_filling(channels, far_field_phase_profile(geom), settings);
}

}  // namespace holoris
