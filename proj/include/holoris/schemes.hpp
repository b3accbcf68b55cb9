#pragma once

#include "holoris/channels.hpp"
#include "holoris/geometry.hpp"
#include "holoris/optimizer.hpp"

#include <Eigen/Core>

#include <optional>
#include <string_view>

namespace holoris {

// RIS configuration strategies, ordered by the CSI they assume.
enum class SchemeId {
  PerfectCsi,     // PGM on the true Rician channels
  LosCsi,         // PGM on the LoS parts, then water-filling
  LocationFocus,  // focusing phases from surface positions, then water-filling
  FarField,       // linear-phase (anomalous reflection) profile, then water-filling
};

std::string_view to_string(SchemeId id);
std::optional<SchemeId> scheme_from_string(std::string_view name);

struct SchemeOutcome {
  RisPhaseProfile theta;
  TransmitCovariance q;
  Eigen::MatrixXcd end_to_end;  // h_dir + g diag(e^{j theta}) h on the combined channels
  double rate = 0.0;            // bits/s/Hz on the combined channels
  PgmStatus status = PgmStatus::Converged;
  int iterations = 0;           // PGM iterations, 0 for closed-form schemes
};

struct WaterFilling {
  TransmitCovariance q;
  Eigen::VectorXd singular_values;  // descending, length min(M, L)
  Eigen::VectorXd powers;           // per mode, same order
  Eigen::MatrixXcd right_vectors;   // L x min(M, L)
  double water_level = 0.0;
};

// Capacity-achieving power allocation over the right-singular modes of h_eff.
// Throws std::invalid_argument for a zero channel.
WaterFilling water_filling_modes(const Eigen::MatrixXcd& h_eff, double power_budget, double noise_power);
TransmitCovariance water_filling(const Eigen::MatrixXcd& h_eff, double power_budget, double noise_power);

// Phase profiles computed from the surface centers only.
RisPhaseProfile focus_phase_profile(const ScenarioGeometry& geom);
RisPhaseProfile far_field_phase_profile(const ScenarioGeometry& geom);

// Starting covariance for the PGM-based schemes: (P_T / L) I.
SchemeOutcome scheme_perfect_csi(const ChannelSet& channels, const PgmSettings& settings,
                                 const RisPhaseProfile& init_theta);
SchemeOutcome scheme_los_csi(const ChannelSet& channels, const PgmSettings& settings,
                             const RisPhaseProfile& init_theta);
SchemeOutcome scheme_location_focus(const ScenarioGeometry& geom, const ChannelSet& channels,
                                    const PgmSettings& settings);
SchemeOutcome scheme_far_field(const ScenarioGeometry& geom, const ChannelSet& channels,
                               const PgmSettings& settings);

// Completes an outcome for a fixed phase profile: water-filled covariance and
// rate on the combined channels.
SchemeOutcome evaluate_with_water_filling(const ChannelSet& channels, const RisPhaseProfile& theta,
                                          const PgmSettings& settings);

}  // namespace holoris
