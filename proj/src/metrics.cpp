#include "holoris/metrics.hpp"

#include "holoris/schemes.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

namespace holoris {

double achievable_rate(const ChannelSet& channels, const RisPhaseProfile& theta, const TransmitCovariance& q,
                       double noise_power) {
  return objective(LinkMatrices{channels.h_dir, channels.h, channels.g}, theta, q, noise_power);
}

double effective_rank(const Eigen::MatrixXcd& matrix) {
  if (matrix.size() == 0) throw std::invalid_argument("effective_rank: empty matrix");
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXcd>(matrix).singularValues();
  const double s_max = s.maxCoeff();
  if (!(s_max > 0.0)) throw std::invalid_argument("effective_rank: zero matrix");
  const double cutoff = 1e-12 * s_max;
  double total = 0.0;
  for (double v : s) {
    if (v > cutoff) total += v;
  }
  double entropy = 0.0;
  for (double v : s) {
    if (v > cutoff) {
      const double p = v / total;
      entropy -= p * std::log(p);
    }
  }
  return std::exp(entropy);
}

std::vector<ModeField> mode_fields(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& h_eff, double power_budget,
                                   double noise_power, int count) {
  if (h.cols() != h_eff.cols()) throw std::invalid_argument("mode_fields: h and h_eff must share the Tx dimension");
  const Eigen::Index available = std::min(h_eff.rows(), h_eff.cols());
  if (count < 0 || count > available) {
    throw std::invalid_argument("mode_fields: requested " + std::to_string(count) + " modes but only " +
                                std::to_string(available) + " exist");
  }
  const WaterFilling wf = water_filling_modes(h_eff, power_budget, noise_power);
  std::vector<ModeField> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ModeField field;
    field.mode_index = i;
    field.singular_value = wf.singular_values(i);
    field.power = wf.powers(i);
    field.values = h * wf.right_vectors.col(i) * std::sqrt(field.power);
    out.push_back(std::move(field));
  }
  return out;
}

}  // namespace holoris
