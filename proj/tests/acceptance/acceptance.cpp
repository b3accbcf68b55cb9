// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Figure-level checks run the shipped configs at full size.

#include "holoris/experiments.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace holoris;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

int worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig shipped(const std::string& name) { return load_config(std::string(HOLORIS_CONFIG_DIR) + "/" + name); }

std::string csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

// Mean of a record field per (scheme, sweep value) at one K.
std::map<std::pair<SchemeId, double>, double> mean_by_point(const std::vector<ExperimentRecord>& records, double k,
                                                            double ExperimentRecord::*field) {
  std::map<std::pair<SchemeId, double>, std::pair<double, int>> acc;
  for (const auto& r : records) {
    if (r.rician_k != k) continue;
    auto& [sum, count] = acc[{r.scheme, r.sweep_value}];
    sum += r.*field;
    ++count;
  }
  std::map<std::pair<SchemeId, double>, double> out;
  for (const auto& [key, v] : acc) out[key] = v.first / v.second;
  return out;
}

std::vector<double> points_of(const std::map<std::pair<SchemeId, double>, double>& means, SchemeId scheme) {
  std::vector<double> out;
  for (const auto& [key, v] : means) {
    if (key.first == scheme) out.push_back(key.second);
  }
  return out;
}

std::vector<PgmTrace> g_traces;  // every PGM run made by the criteria below

Verdict gradient_certification() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  std::uniform_int_distribution<int> dim(1, 4);
  double worst_theta = 0.0;
  double worst_q = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXcd f1 = oracle::random_complex(dim(rng), dim(rng), rng);
    const Eigen::MatrixXcd f2 = oracle::random_complex(dim(rng), f1.cols(), rng);
    const Eigen::MatrixXcd f3 = oracle::random_complex(f1.rows(), f2.rows(), rng);
    const LinkMatrices links{f1, f2, f3};
    const Eigen::VectorXcd phi = oracle::random_unit_modulus(f2.rows(), rng);
    const Eigen::MatrixXcd q = oracle::random_feasible_covariance(f1.cols(), 1.0, rng);
    const double noise = 0.5;

    const Eigen::VectorXcd g = grad_theta(links, phi, q, noise);
    const Eigen::VectorXcd fd = oracle::fd_grad_theta(links, phi, q, noise, 1e-6);
    worst_theta = std::max(worst_theta, (g - fd).norm() / g.norm());

    const Eigen::MatrixXcd gq = grad_q(links, phi, q, noise);
    const Eigen::Index l = f1.cols();
    for (Eigen::Index a = 0; a < l; ++a) {
      for (Eigen::Index b = a; b < l; ++b) {
        for (int part = 0; part < (a == b ? 1 : 2); ++part) {
          Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(l, l);
          const std::complex<double> w = part == 0 ? 1.0 : std::complex<double>(0.0, 1.0);
          d(a, b) += w;
          d(b, a) += std::conj(w);
          const double analytic = (gq * d).trace().real();
          const double numeric = oracle::fd_directional_q(links, phi, q, d, noise, 1e-6);
          worst_q = std::max(worst_q, std::abs(analytic - numeric) / (gq.norm() * d.norm()));
        }
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_theta <= 1e-5 && worst_q <= 1e-5 && seconds < 10.0,
          fmt("worst relative error theta %.2e, Q %.2e over 100 instances in %.2f s", worst_theta, worst_q, seconds)};
}

Verdict projection_oracle() {
  Rng rng(77);
  double worst = 0.0;
  int cases = 0;
  for (Eigen::Index n : {2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const Eigen::MatrixXcd raw = oracle::random_complex(n, n, rng) * (0.5 + i % 3);
      const double budget = 0.25 + 0.5 * (i % 5);
      worst = std::max(worst, (project_q(raw, budget).q - oracle::projection_by_matrix_sign(raw, budget)).norm());
      ++cases;
    }
  }
  return {worst <= 1e-8, fmt("max Frobenius gap %.2e over %d instances", worst, cases)};
}

Verdict water_filling_optimality() {
  Rng rng(99);
  PgmSettings settings;
  settings.noise_power = 0.3;
  settings.power_budget = 1.0;
  double worst_margin = INFINITY;
  double worst_gap = 0.0;
  for (int c = 0; c < 20; ++c) {
    const Eigen::Index m = 2 + c % 3;
    const Eigen::Index l = 2 + (c / 3) % 3;
    const Eigen::MatrixXcd h = oracle::random_complex(m, l, rng);
    const double wf = log_det_rate(h, water_filling(h, 1.0, settings.noise_power).q, settings.noise_power);
    for (int i = 0; i < 100; ++i) {
      const double other =
          log_det_rate(h, oracle::random_feasible_covariance(l, 1.0, rng), settings.noise_power);
      worst_margin = std::min(worst_margin, wf - other);
    }
    const PgmResult pgm = pgm_solve_covariance(h, settings, TransmitCovariance::isotropic(l, 1.0));
    g_traces.push_back(pgm.trace);
    worst_gap = std::max(worst_gap, std::abs(wf - pgm.objective) / wf);
  }
  return {worst_margin >= 0.0 && worst_gap <= 0.005,
          fmt("min margin over random Q %.3e bits, max gap to Q-only PGM %.3f%%", worst_margin, 100 * worst_gap)};
}

struct Fig2Data {
  std::vector<ExperimentRecord> high_k;  // all schemes, full N sweep, K = 100000
  std::vector<ExperimentRecord> largest;  // Scheme 1, N = 50^2, K = 1 and 100000
  ExperimentConfig config;
};

Fig2Data run_fig2() {
  Fig2Data d;
  d.config = shipped("fig2_rate_vs_n.json");
  ExperimentConfig high = d.config;
  high.channel.rician_k = {100000.0};
  d.high_k = run_rate_vs_ris_size(high, {worker_count(), false});

  ExperimentConfig big = d.config;
  big.channel.rician_k = {1.0, 100000.0};
  big.schemes = {SchemeId::PerfectCsi};
  big.sweep.values = {50.0};
  d.largest = run_rate_vs_ris_size(big, {worker_count(), false});
  return d;
}

Verdict fig2_qualitative(const Fig2Data& d) {
  const auto low = mean_by_point(d.largest, 1.0, &ExperimentRecord::rate);
  const auto high = mean_by_point(d.largest, 100000.0, &ExperimentRecord::rate);
  const double r1 = low.at({SchemeId::PerfectCsi, 2500.0});
  const double r5 = high.at({SchemeId::PerfectCsi, 2500.0});
  const int trials = d.config.trials_for(1.0);

  const auto means = mean_by_point(d.high_k, 100000.0, &ExperimentRecord::rate);
  double worst_drop = 0.0;
  std::string where = "none";
  for (SchemeId s : d.config.schemes) {
    const auto points = points_of(means, s);
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double prev = means.at({s, points[i - 1]});
      const double drop = (prev - means.at({s, points[i]})) / prev;
      if (drop > worst_drop) {
        worst_drop = drop;
        where = fmt("%s at N=%g", std::string(to_string(s)).c_str(), points[i]);
      }
    }
  }
  return {r1 > r5 && worst_drop <= 0.01,
          fmt("N=2500 Scheme 1: K=1 mean %.2f (%d trials) vs K=1e5 %.2f; largest drop in N %.3f%% (%s)", r1, trials, r5,
              100 * worst_drop, where.c_str())};
}

Verdict siso_anchor(const Fig2Data& d) {
  const auto means = mean_by_point(d.high_k, 100000.0, &ExperimentRecord::rate);
  const double rate = means.at({SchemeId::PerfectCsi, 4.0});
  const double expected =
      oracle::siso_cascade_rate(d.config.geometry_at(2.0), d.config.tx_power_w(), d.config.noise_power_w());
  const double rel = std::abs(rate - expected) / expected;
  return {rel <= 0.05, fmt("N=4 Scheme 1 %.4f vs closed form %.4f bits/s/Hz (%.2f%%)", rate, expected, 100 * rel)};
}

Verdict focus_close_to_perfect(const Fig2Data& d) {
  const auto means = mean_by_point(d.high_k, 100000.0, &ExperimentRecord::rate);
  double worst = INFINITY;
  double at = 0.0;
  for (double n : points_of(means, SchemeId::PerfectCsi)) {
    const double ratio = means.at({SchemeId::LocationFocus, n}) / means.at({SchemeId::PerfectCsi, n});
    if (ratio < worst) {
      worst = ratio;
      at = n;
    }
  }
  return {worst >= 0.9, fmt("min Scheme 3 / Scheme 1 rate ratio %.4f at N=%g", worst, at)};
}

Verdict dominance_chain(const Fig2Data& d) {
  std::map<std::pair<double, int>, std::map<SchemeId, double>> by_trial;
  for (const auto& r : d.high_k) by_trial[{r.sweep_value, r.trial}][r.scheme] = r.rate;
  int violations = 0;
  double worst = 0.0;
  for (const auto& [key, rates] : by_trial) {
    const double s1 = rates.at(SchemeId::PerfectCsi), s2 = rates.at(SchemeId::LosCsi);
    const double s3 = rates.at(SchemeId::LocationFocus), s4 = rates.at(SchemeId::FarField);
    for (double gap : {s2 - s1, s3 - s2, s4 - s3}) {
      if (gap > 1e-3) ++violations;
      worst = std::max(worst, gap);
    }
  }
  return {violations == 0, fmt("%d violations over %zu trials, largest excess %.2e bits", violations, by_trial.size(), worst)};
}

Verdict fig3_qualitative() {
  const auto config = shipped("fig3_dof_vs_distance.json");
  const auto records = run_dof_vs_distance(config, {worker_count(), false});
  const auto erank = mean_by_point(records, 100000.0, &ExperimentRecord::erank_end_to_end);
  const auto direct = mean_by_point(records, 100000.0, &ExperimentRecord::erank_direct);
  const double e6 = erank.at({SchemeId::PerfectCsi, 6.0});
  const double d6 = direct.at({SchemeId::PerfectCsi, 6.0});
  const double e100 = erank.at({SchemeId::PerfectCsi, 100.0});
  double worst = 0.0;
  double at = 0.0;
  for (double dist : points_of(erank, SchemeId::PerfectCsi)) {
    const double s1 = erank.at({SchemeId::PerfectCsi, dist});
    const double rel = std::abs(erank.at({SchemeId::LocationFocus, dist}) - s1) / s1;
    if (rel > worst) {
      worst = rel;
      at = dist;
    }
  }
  const bool a = e6 > d6;
  const bool b = e100 <= 1.2;
  const bool c = worst <= 0.10;
  return {a && b && c, fmt("(a) D=6 erank %.3f vs direct %.3f %s; (b) D=100 erank %.3f %s; (c) max Scheme 3 gap %.2f%% at D=%g %s",
                           e6, d6, a ? "ok" : "FAIL", e100, b ? "ok" : "FAIL", 100 * worst, at, c ? "ok" : "FAIL")};
}

Verdict fig5_qualitative() {
  const auto config = shipped("fig5_dof_vs_ris_position.json");
  const auto records = run_dof_vs_ris_position(config, {worker_count(), false});
  const auto erank = mean_by_point(records, 100000.0, &ExperimentRecord::erank_end_to_end);
  std::string detail;
  bool spread_ok = true;
  for (SchemeId s : {SchemeId::PerfectCsi, SchemeId::LocationFocus}) {
    double lo = INFINITY, hi = 0.0, sum = 0.0;
    const auto points = points_of(erank, s);
    for (double x : points) {
      const double e = erank.at({s, x});
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      sum += e;
    }
    const double rel = (hi - lo) / (sum / static_cast<double>(points.size()));
    spread_ok &= rel <= 0.30;
    detail += fmt("%s spread %.1f%% of mean; ", std::string(to_string(s)).c_str(), 100 * rel);
  }

  // Mirror oracle on LoS channels with the focusing profile.
  double worst = 0.0;
  for (double x : config.sweep.values) {
    const double mirror = config.geometry.wall_distance_m - x;
    if (mirror < x) continue;
    auto erank_at = [&](double offset) {
      const auto geom = config.geometry_at(offset);
      const Eigen::MatrixXcd h = los_tx_to_ris(geom);
      const Eigen::MatrixXcd g = los_ris_to_rx(geom);
      const Eigen::MatrixXcd dir = los_direct(geom, {0.0, config.channel.direct_pathloss_exponent,
                                                     config.channel.direct_blocked, 0});
      const Eigen::MatrixXcd z = dir + g * focus_phase_profile(geom).reflection().asDiagonal() * h;
      return effective_rank(z);
    };
    worst = std::max(worst, std::abs(erank_at(x) - erank_at(mirror)));
  }
  detail += fmt("mirror asymmetry %.2e", worst);
  return {spread_ok && worst <= 1e-6, detail};
}

Verdict monotone_ascent() {
  // Random instances plus one physical-scale instance, together with the
  // traces collected above.
  Rng rng(5);
  std::uniform_int_distribution<int> dim(1, 6);
  PgmSettings settings;
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXcd f1 = oracle::random_complex(dim(rng), dim(rng), rng);
    const Eigen::MatrixXcd f2 = oracle::random_complex(dim(rng), f1.cols(), rng);
    const Eigen::MatrixXcd f3 = oracle::random_complex(f1.rows(), f2.rows(), rng);
    const auto r = pgm_solve({f1, f2, f3}, settings, random_phase_profile(f2.rows(), rng),
                             TransmitCovariance::isotropic(f1.cols(), 1.0));
    g_traces.push_back(r.trace);
  }
  const auto config = shipped("fig2_rate_vs_n.json");
  const auto geom = config.geometry_at(20.0);
  for (double k : {1.0, 100000.0}) {
    const auto channels = build_channels(geom, {k, 3.0, true, 3}, 0);
    const auto r = pgm_solve({channels.h_dir, channels.h, channels.g}, config.optimizer,
                             random_phase_profile(static_cast<Eigen::Index>(geom.ris().size()), rng),
                             TransmitCovariance::isotropic(static_cast<Eigen::Index>(geom.tx().size()),
                                                           config.tx_power_w()));
    g_traces.push_back(r.trace);
  }
  std::size_t bad = 0, iterations = 0;
  for (const auto& t : g_traces) {
    bad += t.is_monotone(1e-12) ? 0 : 1;
    iterations += t.iterations.size();
  }
  return {bad == 0, fmt("%zu of %zu runs non-monotone (%zu iterations checked)", bad, g_traces.size(), iterations)};
}

Verdict determinism() {
  auto config = shipped("fig5_dof_vs_ris_position.json");
  config.sweep.values = {2.5, 7.5};
  config.channel.rician_k = {1.0};
  config.channel.trials = 2;
  config.geometry.ris_count_x = config.geometry.ris_count_y = 20;
  const std::string first = csv(run_dof_vs_ris_position(config, {1, false}));
  const std::string second = csv(run_dof_vs_ris_position(config, {1, false}));
  const std::string parallel = csv(run_dof_vs_ris_position(config, {4, false}));

  auto modes_config = shipped("fig4_modes.json");
  modes_config.geometry.ris_count_x = modes_config.geometry.ris_count_y = 20;
  std::ostringstream m1, m2;
  write_modes_csv(m1, run_modes(modes_config));
  write_modes_csv(m2, run_modes(modes_config));
  const bool ok = first == second && first == parallel && m1.str() == m2.str();
  return {ok, fmt("records %zu bytes, modes %zu bytes, repeated and 4-thread runs %s", first.size(), m1.str().size(),
                  ok ? "identical" : "differ")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), seconds);
    std::fflush(stdout);
  };

  report("gradient certification", gradient_certification);
  report("projection oracle", projection_oracle);
  report("water-filling optimality", water_filling_optimality);

  Fig2Data fig2;
  bool fig2_ok = true;
  std::string fig2_error;
  const auto fig2_start = std::chrono::steady_clock::now();
  try {
    fig2 = run_fig2();
  } catch (const std::exception& e) {
    fig2_ok = false;
    fig2_error = e.what();
  }
  std::printf("(fig2 sweep shared by the next four criteria: %.1f s)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - fig2_start).count());
  auto with_fig2 = [&](Verdict (*check)(const Fig2Data&)) {
    return [&, check] { return fig2_ok ? check(fig2) : Verdict{false, "fig2 sweep failed: " + fig2_error}; };
  };
  report("fig2 rate vs N and K", with_fig2(fig2_qualitative));
  report("SISO anchor", with_fig2(siso_anchor));
  report("Scheme 3 within 90% of Scheme 1", with_fig2(focus_close_to_perfect));
  report("dominance chain at K=1e5", with_fig2(dominance_chain));
  report("fig3 DoF vs distance", fig3_qualitative);
  report("fig5 DoF vs RIS position", fig5_qualitative);
  report("monotone ascent", monotone_ascent);
  report("determinism", determinism);

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
