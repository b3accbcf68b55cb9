#include "holoris/optimizer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace holoris {

namespace {

constexpr double kLog2e = std::numbers::log2e;

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

// Factorization of I + Z q Z^H / noise shared by the objective and gradients.
struct NoiseFactor {
  Eigen::LLT<Eigen::MatrixXcd> llt;
  double noise;

  NoiseFactor(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& q, double noise_power) : noise(noise_power) {
    Eigen::MatrixXcd a = (z * q * z.adjoint()) / noise_power;
    a = hermitian_part(a);
    a.diagonal().array() += 1.0;
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("noise-plus-signal covariance is not positive definite");
    }
  }

  double log2det() const {
    const auto& l = llt.matrixLLT();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i).real());
    return 2.0 * sum * kLog2e;
  }

  // (noise I + Z q Z^H)^-1 * rhs
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const { return llt.solve(rhs) / noise; }
};

void check_noise(double noise_power) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be positive");
}

void check_covariance_shape(const Eigen::MatrixXcd& q, Eigen::Index antennas) {
  if (q.rows() != antennas || q.cols() != antennas) {
    throw std::invalid_argument("covariance must be " + std::to_string(antennas) + "x" + std::to_string(antennas));
  }
}

Eigen::VectorXcd theta_gradient_at(const LinkMatrices& links, const Eigen::MatrixXcd& z, const NoiseFactor& factor,
                                   const Eigen::MatrixXcd& q) {
  const Eigen::MatrixXcd x = factor.solve(z * q);  // M x L
  const Eigen::MatrixXcd b = links.reflected.adjoint() * x;  // N x L
  return kLog2e * b.cwiseProduct(links.incident.conjugate()).rowwise().sum();
}

Eigen::MatrixXcd q_gradient_at(const Eigen::MatrixXcd& z, const NoiseFactor& factor) {
  return kLog2e * hermitian_part(z.adjoint() * factor.solve(z));
}

// Water-filling rate over the first `streams` gains, sorted descending.
double water_filling_rate(const std::vector<double>& gains, std::size_t streams, double power_budget) {
  for (std::size_t k = streams; k >= 1; --k) {
    if (!(gains[k - 1] > 0.0)) continue;
    double inverse_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) inverse_sum += 1.0 / gains[i];
    const double level = (power_budget + inverse_sum) / static_cast<double>(k);
    if (level <= 1.0 / gains[k - 1]) continue;
    double rate = 0.0;
    for (std::size_t i = 0; i < k; ++i) rate += std::log2(level * gains[i]);
    return rate;
  }
  return 0.0;
}

// Lets the covariance line search skip candidates that provably fail the
// ascent test. Let g1 >= g2 >= ... be the gradient eigenvalues and q feasible.
// By Weyl's inequality, mu * sum_{i<=r} (g_i - g_{r+1}) >= (r+1) P forces the
// projection of q + mu*grad to have rank at most r. Its rate is then bounded
// by water-filling over the r strongest singular values of Z. If that bound is
// below the current objective, the candidate is rejected.
class LineSearchSkip {
 public:
  LineSearchSkip(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& grad, double objective, double noise_power,
                 double power_budget) {
    const Eigen::Index n = grad.rows();
    if (n < 2 || z.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> g_eig(grad, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> z_eig(z.adjoint() * z, Eigen::EigenvaluesOnly);
    std::vector<double> g(n), gains(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = g_eig.eigenvalues()(n - 1 - i);
      gains[i] = z_eig.eigenvalues()(n - 1 - i) / noise_power;
    }
    // The margin absorbs rounding in the candidate's evaluated objective.
    const double ceiling = objective - 1e-9 * std::max(1.0, std::abs(objective));
    double head = 0.0;
    for (std::size_t r = 1; r < g.size(); ++r) {
      head += g[r - 1];
      const double spread = head - static_cast<double>(r) * g[r];
      if (!(spread > 0.0)) continue;
      if (water_filling_rate(gains, r, power_budget) >= ceiling) break;
      threshold_ = std::min(threshold_, static_cast<double>(r + 1) * power_budget / spread * (1.0 + 1e-9));
    }
  }

  bool skips(double mu) const { return mu >= threshold_; }

 private:
  double threshold_ = std::numeric_limits<double>::infinity();
};

}  // namespace

RisPhaseProfile::RisPhaseProfile(Eigen::VectorXd phases) : phases_(std::move(phases)) {
  for (auto& p : phases_) p = wrap_phase(p);
}

RisPhaseProfile RisPhaseProfile::from_reflection(const Eigen::VectorXcd& coefficients) {
  Eigen::VectorXd phases(coefficients.size());
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) phases(i) = std::arg(coefficients(i));
  return RisPhaseProfile(std::move(phases));
}

Eigen::VectorXcd RisPhaseProfile::reflection() const {
  Eigen::VectorXcd out(phases_.size());
  for (Eigen::Index i = 0; i < phases_.size(); ++i) out(i) = std::polar(1.0, phases_(i));
  return out;
}

double wrap_phase(double radians) { return std::remainder(radians, 2.0 * std::numbers::pi); }

RisPhaseProfile random_phase_profile(Eigen::Index cells, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  Eigen::VectorXd phases(cells);
  for (auto& p : phases) p = uniform(rng);
  return RisPhaseProfile(std::move(phases));
}

TransmitCovariance TransmitCovariance::isotropic(Eigen::Index antennas, double power_budget) {
  return {Eigen::MatrixXcd::Identity(antennas, antennas) * (power_budget / static_cast<double>(antennas))};
}

bool is_feasible(const TransmitCovariance& cov, double power_budget) {
  const auto& q = cov.q;
  if (q.rows() != q.cols()) return false;
  const double norm = q.norm();
  if ((q - q.adjoint()).norm() > 1e-10 * std::max(norm, 1e-300)) return false;
  const double tr = cov.trace();
  if (tr > power_budget * (1.0 + 1e-9)) return false;
  if (q.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_part(q), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -1e-10 * std::max(tr, 0.0);
}

void LinkMatrices::check() const {
  const auto m = direct.rows();
  const auto l = direct.cols();
  const auto n = incident.rows();
  if (incident.cols() != l) throw std::invalid_argument("incident matrix must have as many columns as direct");
  if (reflected.rows() != m) throw std::invalid_argument("reflected matrix must have as many rows as direct");
  if (reflected.cols() != n) throw std::invalid_argument("reflected columns must match incident rows");
}

Eigen::MatrixXcd end_to_end(const LinkMatrices& links, const Eigen::VectorXcd& reflection) {
  links.check();
  if (reflection.size() != links.cell_count()) {
    throw std::invalid_argument("reflection vector length must equal the RIS cell count");
  }
  Eigen::MatrixXcd z = links.direct;
  if (links.cell_count() > 0) {
    const Eigen::MatrixXcd scaled = reflection.asDiagonal() * links.incident;
    z.noalias() += links.reflected * scaled;
  }
  return z;
}

double log_det_rate(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& q, double noise_power) {
  check_noise(noise_power);
  check_covariance_shape(q, z.cols());
  return std::max(0.0, NoiseFactor(z, q, noise_power).log2det());
}

double objective(const LinkMatrices& links, const Eigen::VectorXcd& reflection, const Eigen::MatrixXcd& q,
                 double noise_power) {
  return log_det_rate(end_to_end(links, reflection), q, noise_power);
}

double objective(const LinkMatrices& links, const RisPhaseProfile& theta, const TransmitCovariance& q,
                 double noise_power) {
  return objective(links, theta.reflection(), q.q, noise_power);
}

Eigen::VectorXcd grad_theta(const LinkMatrices& links, const Eigen::VectorXcd& reflection,
                            const Eigen::MatrixXcd& q, double noise_power) {
  check_noise(noise_power);
  const Eigen::MatrixXcd z = end_to_end(links, reflection);
  check_covariance_shape(q, z.cols());
  return theta_gradient_at(links, z, NoiseFactor(z, q, noise_power), q);
}

Eigen::MatrixXcd grad_q(const LinkMatrices& links, const Eigen::VectorXcd& reflection, const Eigen::MatrixXcd& q,
                        double noise_power) {
  check_noise(noise_power);
  const Eigen::MatrixXcd z = end_to_end(links, reflection);
  check_covariance_shape(q, z.cols());
  return q_gradient_at(z, NoiseFactor(z, q, noise_power));
}

Eigen::VectorXcd project_unit_modulus(const Eigen::VectorXcd& raw) {
  Eigen::VectorXcd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double mag = std::abs(raw(i));
    out(i) = mag > 0.0 ? raw(i) / mag : std::complex<double>(1.0, 0.0);
  }
  return out;
}

RisPhaseProfile project_theta(const Eigen::VectorXcd& raw) {
  return RisPhaseProfile::from_reflection(project_unit_modulus(raw));
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("power budget must be positive");
  Eigen::VectorXd clipped = v.cwiseMax(0.0);
  if (clipped.sum() <= budget) return clipped;

  // Sum constraint is active: project onto {x >= 0, sum(x) = budget}.
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - budget) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) shift = candidate;
  }
  return (v.array() - shift).cwiseMax(0.0).matrix();
}

TransmitCovariance project_q(const Eigen::MatrixXcd& raw, double power_budget) {
  if (raw.rows() != raw.cols()) throw std::invalid_argument("project_q: matrix must be square");
  if (raw.size() == 0) return {raw};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_part(raw));
  const Eigen::VectorXd lambda = project_capped_simplex(eig.eigenvalues(), power_budget);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  return {hermitian_part(v * lambda.asDiagonal() * v.adjoint())};
}

void PgmSettings::validate() const {
  if (!(max_step_theta > 0.0 && max_step_q > 0.0)) throw std::invalid_argument("max step sizes must be positive");
  if (!(contraction_theta > 0.0 && contraction_theta < 1.0 && contraction_q > 0.0 && contraction_q < 1.0)) {
    throw std::invalid_argument("contraction factors must lie in (0, 1)");
  }
  if (!(margin_theta > 0.0 && margin_q > 0.0)) throw std::invalid_argument("ascent margins must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (max_contractions < 0) throw std::invalid_argument("max_contractions must be nonnegative");
  if (!(rel_tolerance > 0.0)) throw std::invalid_argument("rel_tolerance must be positive");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be positive");
  if (!(power_budget > 0.0)) throw std::invalid_argument("power_budget must be positive");
}

void PgmTrace::write_csv(std::ostream& out) const {
  out << "iteration,objective,mu1,mu2\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& it : iterations) {
    out << it.iteration << ',' << it.objective << ',' << it.step_theta << ',' << it.step_q << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

bool PgmTrace::is_monotone(double slack) const {
  for (std::size_t i = 1; i < iterations.size(); ++i) {
    if (iterations[i].objective < iterations[i - 1].objective - slack) return false;
  }
  return true;
}

namespace {

// Shared iteration. When `update_theta` is false the RIS block is held fixed
// and only the covariance moves.
PgmResult run_pgm(const LinkMatrices& links, const PgmSettings& settings, Eigen::VectorXcd phi,
                  const TransmitCovariance& init_q, bool update_theta) {
  settings.validate();
  links.check();
  if (phi.size() != links.cell_count()) throw std::invalid_argument("initial phase profile has the wrong length");
  check_covariance_shape(init_q.q, links.transmit_size());

  const double noise = settings.noise_power;
  Eigen::MatrixXcd q = project_q(init_q.q, settings.power_budget).q;
  Eigen::MatrixXcd z = end_to_end(links, phi);
  double f = log_det_rate(z, q, noise);

  PgmResult result;
  result.trace.iterations.push_back({0, f, 0.0, 0.0, 0.0, 0.0});
  result.status = PgmStatus::IterationLimit;

  for (int iter = 1; iter <= settings.max_iterations; ++iter) {
    const double f_start = f;
    PgmIterate record{iter, f, 0.0, 0.0, 0.0, 0.0};
    bool theta_moved = false;
    bool q_moved = false;

    if (update_theta) {
      const Eigen::VectorXcd grad = theta_gradient_at(links, z, NoiseFactor(z, q, noise), q);
      double mu = settings.max_step_theta;
      for (int a = 0; a <= settings.max_contractions; ++a, mu *= settings.contraction_theta) {
        const Eigen::VectorXcd raw = phi + mu * grad;
        Eigen::VectorXcd candidate = project_unit_modulus(raw);
        const double move = (candidate - phi).squaredNorm();
        Eigen::MatrixXcd z_candidate = end_to_end(links, candidate);
        const double f_candidate = log_det_rate(z_candidate, q, noise);
        if (f_candidate >= f + settings.margin_theta * move) {
          theta_moved = move > 0.0;
          record.step_theta = mu;
          record.residual_theta = (candidate - raw).norm();
          phi = std::move(candidate);
          z = std::move(z_candidate);
          f = f_candidate;
          break;
        }
      }
    }

    {
      const Eigen::MatrixXcd grad = q_gradient_at(z, NoiseFactor(z, q, noise));
      const LineSearchSkip skip(z, grad, f, noise, settings.power_budget);
      double mu = settings.max_step_q;
      for (int b = 0; b <= settings.max_contractions; ++b, mu *= settings.contraction_q) {
        if (skip.skips(mu)) continue;
        const Eigen::MatrixXcd raw = q + mu * grad;
        Eigen::MatrixXcd candidate = project_q(raw, settings.power_budget).q;
        const double move = (candidate - q).squaredNorm();
        const double f_candidate = log_det_rate(z, candidate, noise);
        if (f_candidate >= f + settings.margin_q * move) {
          q_moved = move > 0.0;
          record.step_q = mu;
          record.residual_q = (candidate - raw).norm();
          q = std::move(candidate);
          f = f_candidate;
          break;
        }
      }
    }

    record.objective = f;
    result.trace.iterations.push_back(record);

    if (!theta_moved && !q_moved) {
      result.status = PgmStatus::Converged;
      break;
    }
    if (std::abs(f - f_start) <= settings.rel_tolerance * std::abs(f)) {
      result.status = PgmStatus::Converged;
      break;
    }
  }

  result.theta = RisPhaseProfile::from_reflection(phi);
  result.q = TransmitCovariance{q};
  result.objective = f;
  return result;
}

}  // namespace

PgmResult pgm_solve(const LinkMatrices& links, const PgmSettings& settings, const RisPhaseProfile& init_theta,
                    const TransmitCovariance& init_q) {
  return run_pgm(links, settings, init_theta.reflection(), init_q, true);
}

PgmResult pgm_solve_covariance(const Eigen::MatrixXcd& h_eff, const PgmSettings& settings,
                               const TransmitCovariance& init_q) {
  const Eigen::MatrixXcd no_incident(0, h_eff.cols());
  const Eigen::MatrixXcd no_reflected(h_eff.rows(), 0);
  const LinkMatrices links{h_eff, no_incident, no_reflected};
  return run_pgm(links, settings, Eigen::VectorXcd(0), init_q, false);
}

}  // namespace holoris
