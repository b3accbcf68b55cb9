#pragma once

#include "holoris/channels.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace holoris {

// Phase shifts of the RIS cells, kept wrapped to [-pi, pi].
class RisPhaseProfile {
 public:
  RisPhaseProfile() = default;
  explicit RisPhaseProfile(Eigen::VectorXd phases);

  static RisPhaseProfile from_reflection(const Eigen::VectorXcd& coefficients);

  const Eigen::VectorXd& phases() const { return phases_; }
  Eigen::VectorXcd reflection() const;
  Eigen::Index size() const { return phases_.size(); }

 private:
  Eigen::VectorXd phases_;
};

double wrap_phase(double radians);
RisPhaseProfile random_phase_profile(Eigen::Index cells, Rng& rng);

struct TransmitCovariance {
  Eigen::MatrixXcd q;

  static TransmitCovariance isotropic(Eigen::Index antennas, double power_budget);
  double trace() const { return q.trace().real(); }
};

// True when q is Hermitian (relative Frobenius asymmetry <= 1e-10), PSD
// (min eigenvalue >= -1e-10 * trace) and within budget (relative 1e-9).
bool is_feasible(const TransmitCovariance& cov, double power_budget);

// The three generic matrices of the parametric rate objective:
//   Z = direct + reflected * diag(reflection) * incident
// with direct M x L, incident N x L and reflected M x N.
struct LinkMatrices {
  const Eigen::MatrixXcd& direct;
  const Eigen::MatrixXcd& incident;
  const Eigen::MatrixXcd& reflected;

  Eigen::Index receive_size() const { return direct.rows(); }
  Eigen::Index transmit_size() const { return direct.cols(); }
  Eigen::Index cell_count() const { return incident.rows(); }
  void check() const;  // throws std::invalid_argument on a dimension mismatch
};

Eigen::MatrixXcd end_to_end(const LinkMatrices& links, const Eigen::VectorXcd& reflection);

// log2 det(I + Z q Z^H / noise), evaluated through a Cholesky factor.
double log_det_rate(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& q, double noise_power);

double objective(const LinkMatrices& links, const Eigen::VectorXcd& reflection, const Eigen::MatrixXcd& q,
                 double noise_power);
double objective(const LinkMatrices& links, const RisPhaseProfile& theta, const TransmitCovariance& q,
                 double noise_power);

// Gradient with respect to the conjugate reflection coefficients:
//   log2(e) * diag(reflected^H (noise I + Z q Z^H)^-1 Z q incident^H)
// The real-variable derivatives are d/dRe = 2 Re(g), d/dIm = 2 Im(g).
Eigen::VectorXcd grad_theta(const LinkMatrices& links, const Eigen::VectorXcd& reflection,
                            const Eigen::MatrixXcd& q, double noise_power);

// Hermitian gradient log2(e) * Z^H (noise I + Z q Z^H)^-1 Z. The directional
// derivative along a Hermitian direction D is Re tr(grad * D).
Eigen::MatrixXcd grad_q(const LinkMatrices& links, const Eigen::VectorXcd& reflection, const Eigen::MatrixXcd& q,
                        double noise_power);

// Nearest unit-modulus vector; zero entries map to 1.
Eigen::VectorXcd project_unit_modulus(const Eigen::VectorXcd& raw);
RisPhaseProfile project_theta(const Eigen::VectorXcd& raw);

// Euclidean projection of v onto {x >= 0, sum(x) <= budget}.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double budget);

// Frobenius projection onto {Q = Q^H, Q >= 0, tr Q <= budget}.
TransmitCovariance project_q(const Eigen::MatrixXcd& raw, double power_budget);

struct PgmSettings {
  double max_step_theta = 1e3;     // L1
  double max_step_q = 1e3;         // L2
  double contraction_theta = 0.5;  // rho1
  double contraction_q = 0.5;      // rho2
  double margin_theta = 1e-5;      // delta1
  double margin_q = 1e-5;          // delta2
  int max_iterations = 1000;
  int max_contractions = 60;
  double rel_tolerance = 1e-6;
  double noise_power = 1.0;   // [W]
  double power_budget = 1.0;  // [W]

  void validate() const;  // throws std::invalid_argument
};

enum class PgmStatus { Converged, IterationLimit };

struct PgmIterate {
  int iteration = 0;
  double objective = 0.0;
  double step_theta = 0.0;  // accepted mu1, 0 when no step was taken
  double step_q = 0.0;      // accepted mu2, 0 when no step was taken
  double residual_theta = 0.0;
  double residual_q = 0.0;
};

struct PgmTrace {
  std::vector<PgmIterate> iterations;

  // Columns: iteration,objective,mu1,mu2
  void write_csv(std::ostream& out) const;
  bool is_monotone(double slack = 1e-12) const;
};

struct PgmResult {
  RisPhaseProfile theta;
  TransmitCovariance q;
  PgmTrace trace;
  PgmStatus status = PgmStatus::Converged;
  double objective = 0.0;
};

// Two-step-size projected gradient ascent with backtracking on both blocks.
// The initial covariance is projected onto the feasible set before use.
PgmResult pgm_solve(const LinkMatrices& links, const PgmSettings& settings, const RisPhaseProfile& init_theta,
                    const TransmitCovariance& init_q);

// Same iteration with the RIS block frozen: maximizes log_det_rate(h_eff, Q)
// over feasible covariances only.
PgmResult pgm_solve_covariance(const Eigen::MatrixXcd& h_eff, const PgmSettings& settings,
                               const TransmitCovariance& init_q);

}  // namespace holoris
