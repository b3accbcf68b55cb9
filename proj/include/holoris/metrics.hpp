#pragma once

#include "holoris/channels.hpp"
#include "holoris/optimizer.hpp"

#include <Eigen/Core>

#include <vector>

namespace holoris {

// Rate of the combined channels for a given configuration [bits/s/Hz].
double achievable_rate(const ChannelSet& channels, const RisPhaseProfile& theta, const TransmitCovariance& q,
                       double noise_power);

// exp of the Shannon entropy of the L1-normalized singular values.
// Singular values below 1e-12 * s_max are ignored. Throws on a zero matrix.
double effective_rank(const Eigen::MatrixXcd& matrix);

struct ModeField {
  int mode_index = 0;         // 0 = strongest
  double singular_value = 0.0;
  double power = 0.0;         // water-filled P_T,i [W]
  Eigen::VectorXcd values;    // w_i over the RIS cells
};

// Communication modes of h_eff seen at the RIS: w_i = h v_i sqrt(P_T,i).
std::vector<ModeField> mode_fields(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& h_eff, double power_budget,
                                   double noise_power, int count);

}  // namespace holoris
