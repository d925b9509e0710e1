#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdridge/estimators.hpp"
#include "hdridge/model.hpp"
#include "hdridge/mp_law.hpp"
#include "hdridge/numeric.hpp"
#include "hdridge/rng.hpp"
#include "hdridge/spectra.hpp"

namespace hdridge {

enum class RiskFunctional { loss_mc, trace_mc };

inline const char* risk_functional_name(RiskFunctional f) {
  return f == RiskFunctional::loss_mc ? "loss_mc" : "trace_mc";
}

struct RiskEstimate {
  double mean = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  int replicates = 0;
  RiskFunctional functional = RiskFunctional::loss_mc;
};

struct BetaMode {
  enum class Kind { fixed_vector, sphere_resample };

  static BetaMode sphere_resample() { return {Kind::sphere_resample, {}}; }
  static BetaMode fixed_vector(Eigen::VectorXd v) { return {Kind::fixed_vector, std::move(v)}; }

  Kind kind;
  Eigen::VectorXd fixed;
};

struct ExperimentSpec {
  ModelConfig config;
  EstimatorId estimator;
  int replicates;
  BetaMode beta_mode;
};

struct GridPoint {
  int n = 0;
  int d = 0;
  double value = 0.0;
  double std_error = 0.0;
};

struct ConvergenceReport {
  std::vector<GridPoint> grid;
  double fitted_rate_exponent = std::numeric_limits<double>::quiet_NaN();
  double reference_exponent = 0.0;
};

inline Estimate apply_estimator(const EstimatorId& id, const DataSet& data) {
  switch (id.kind) {
    case EstimatorId::Kind::ridge:
      return ridge(data, RidgeParam::from_value(id.t));
    case EstimatorId::Kind::ols:
      return ols(data);
    case EstimatorId::Kind::null_estimator:
      return null_estimate(static_cast<int>(data.d()));
    case EstimatorId::Kind::adaptive_ridge:
      return adaptive_ridge(data);
  }
  throw std::logic_error("apply_estimator: unknown estimator kind");
}

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t label) {
  return mix64(mix64(root) ^ (0xd1b54a32d192ed03ULL * (label + 1)));
}

// Per-replicate losses for a set of estimators sharing common random numbers:
// replicate k derives its stream from (root, k) and draws beta (when
// resampled), then X, then eps, in that documented order; every estimator
// sees the same draw. losses[e][k] is written by whichever thread owns k, so
// results are independent of the partition.
inline std::vector<std::vector<double>> mc_losses(const ModelConfig& config,
                                                  std::span<const EstimatorId> estimators,
                                                  int replicates, const BetaMode& beta_mode,
                                                  std::uint64_t root, int threads) {
  if (replicates < 1)
    throw std::invalid_argument("mc_losses: replicates must be positive");
  if (beta_mode.kind == BetaMode::Kind::fixed_vector &&
      beta_mode.fixed.size() != config.d)
    throw std::invalid_argument("mc_losses: fixed beta length must equal config.d");

  std::vector<std::vector<double>> losses(estimators.size());
  for (auto& v : losses) v.resize(static_cast<std::size_t>(replicates));

  parallel_for(replicates, threads, [&](int k) {
    try {
      RngStream stream = RngStream::substream(root, static_cast<std::uint64_t>(k));
      Eigen::VectorXd beta;
      if (beta_mode.kind == BetaMode::Kind::sphere_resample)
        beta = sample_sphere(config.d, config.tau, stream).beta;
      else
        beta = beta_mode.fixed;
      const DataSet data = generate(config, beta, stream);
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        const Estimate est = apply_estimator(estimators[e], data);
        losses[e][static_cast<std::size_t>(k)] = (est.beta_hat - beta).squaredNorm();
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error("replicate " + std::to_string(k) + ": " + ex.what());
    }
  });
  return losses;
}

inline RiskEstimate summarize(std::span<const double> values, RiskFunctional functional) {
  const MeanStdError stat = mean_and_std_error(values);
  RiskEstimate est;
  est.mean = stat.mean;
  est.std_error = stat.std_error;
  est.replicates = static_cast<int>(values.size());
  est.functional = functional;
  return est;
}

}  // namespace detail

// Monte Carlo estimate of the unconditional risk E||beta_hat - beta||^2,
// fresh (X, eps) per replicate (and fresh beta under sphere resampling).
// Deterministic in rng_root regardless of thread count.
inline RiskEstimate mc_risk(const ExperimentSpec& spec, std::uint64_t rng_root,
                            int threads = 1) {
  const EstimatorId ids[] = {spec.estimator};
  const auto losses = detail::mc_losses(spec.config, ids, spec.replicates,
                                        spec.beta_mode, rng_root, threads);
  return detail::summarize(losses[0], RiskFunctional::loss_mc);
}

// Rao-Blackwellized risk estimate for the oracle ridge estimator: each
// replicate draws X only and evaluates tr{(X^T X + d/tau^2 I)^-1}, whose
// expectation equals the oracle ridge risk. Far lower variance than the
// loss route since beta and eps are integrated out analytically.
inline RiskEstimate mc_trace_risk(const ModelConfig& config, int replicates,
                                  std::uint64_t rng_root, int threads = 1) {
  if (replicates < 1)
    throw std::invalid_argument("mc_trace_risk: replicates must be positive");
  std::vector<double> values(static_cast<std::size_t>(replicates));
  detail::parallel_for(replicates, threads, [&](int k) {
    try {
      RngStream stream = RngStream::substream(rng_root, static_cast<std::uint64_t>(k));
      Eigen::MatrixXd x(config.n, config.d);
      for (int i = 0; i < config.n; ++i)
        for (int j = 0; j < config.d; ++j) x(i, j) = stream.standard_normal();
      values[static_cast<std::size_t>(k)] = exact_ridge_risk(spectrum_of(x), config.tau);
    } catch (const std::exception& ex) {
      throw std::runtime_error("replicate " + std::to_string(k) + ": " + ex.what());
    }
  });
  return detail::summarize(values, RiskFunctional::trace_mc);
}

// Two estimators on common random numbers, with the paired gap statistics.
struct PairedRisk {
  RiskEstimate first;
  RiskEstimate second;
  double gap_mean = 0.0;       // mean(first loss - second loss)
  double gap_std_error = 0.0;  // paired standard error of that difference
};

inline PairedRisk mc_risk_paired(const ModelConfig& config, const EstimatorId& first,
                                 const EstimatorId& second, int replicates,
                                 const BetaMode& beta_mode, std::uint64_t rng_root,
                                 int threads = 1) {
  const EstimatorId ids[] = {first, second};
  const auto losses =
      detail::mc_losses(config, ids, replicates, beta_mode, rng_root, threads);
  PairedRisk out;
  out.first = detail::summarize(losses[0], RiskFunctional::loss_mc);
  out.second = detail::summarize(losses[1], RiskFunctional::loss_mc);
  std::vector<double> diff(losses[0].size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = losses[0][k] - losses[1][k];
  const MeanStdError stat = mean_and_std_error(diff);
  out.gap_mean = stat.mean;
  out.gap_std_error = stat.std_error;
  return out;
}

// Grid of sample sizes at a fixed aspect ratio rho = d/n; every n must give
// an integral d.
struct RatioGrid {
  double rho = 0.0;
  std::vector<int> n_values;

  std::vector<std::pair<int, int>> resolve() const {
    if (n_values.size() < 3)
      throw std::invalid_argument("RatioGrid: need at least 3 grid sizes");
    std::vector<std::pair<int, int>> nd;
    for (int n : n_values) {
      if (n < 1) throw std::invalid_argument("RatioGrid: n must be positive");
      const double exact = rho * n;
      const int d = static_cast<int>(std::llround(exact));
      if (d < 1 || std::fabs(exact - d) > 1e-9)
        throw std::invalid_argument("RatioGrid: rho * n must be a positive integer (n=" +
                                    std::to_string(n) + ")");
      nd.emplace_back(n, d);
    }
    return nd;
  }
};

// Per-n gap between the Monte Carlo risk of the oracle ridge estimator and
// the MP asymptote (d/n) m_{d/n}(-d/(n tau^2)), with the log-log slope fitted
// against the reference -1/2. The trace route is the default estimator of
// the risk; route = loss_mc draws full datasets instead.
inline ConvergenceReport risk_vs_asymptotic(const RatioGrid& grid, SignalStrength tau,
                                            int replicates, std::uint64_t rng_root,
                                            RiskFunctional route = RiskFunctional::trace_mc,
                                            int threads = 1, bool allow_near_one = false) {
  if (!allow_near_one && std::fabs(grid.rho - 1.0) < 0.1)
    throw std::invalid_argument(
        "risk_vs_asymptotic: d/n must be at least 0.1 away from 1 unless overridden");
  const auto nd = grid.resolve();

  ConvergenceReport report;
  report.reference_exponent = -0.5;
  std::vector<double> ns, gaps;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const auto [n, d] = nd[i];
    const ModelConfig config(d, n, tau, rng_root);
    const std::uint64_t point_root = detail::derive_seed(rng_root, i);
    RiskEstimate est;
    if (route == RiskFunctional::trace_mc) {
      est = mc_trace_risk(config, replicates, point_root, threads);
    } else {
      const ExperimentSpec spec{config, EstimatorId::ridge(RidgeParam::from_value(tau.value())),
                                replicates, BetaMode::sphere_resample()};
      est = mc_risk(spec, point_root, threads);
    }
    const double ratio = static_cast<double>(d) / n;
    const double reference =
        tau.value() == 0.0
            ? 0.0
            : ratio * mp_stieltjes(AspectRatio(ratio),
                                   -ratio / (tau.value() * tau.value()));
    GridPoint point;
    point.n = n;
    point.d = d;
    point.value = std::fabs(est.mean - reference);
    point.std_error = est.std_error;
    report.grid.push_back(point);
    ns.push_back(static_cast<double>(n));
    gaps.push_back(point.value);
  }
  report.fitted_rate_exponent = fitted_loglog_slope(ns, gaps);
  return report;
}

// |MC risk(adaptive ridge) - MC risk(oracle ridge)| per grid size, both
// estimators evaluated on identical draws (common random numbers). Thm-3
// conditions |n - d| > 9 and n > 8 are enforced.
inline ConvergenceReport adaptive_gap_study(const RatioGrid& grid, SignalStrength tau,
                                            int replicates, std::uint64_t rng_root,
                                            int threads = 1) {
  const auto nd = grid.resolve();
  for (const auto& [n, d] : nd) {
    if (std::abs(n - d) <= 9 || n <= 8)
      throw std::invalid_argument("adaptive_gap_study: requires |n - d| > 9 and n > 8");
  }

  ConvergenceReport report;
  report.reference_exponent = -0.5;
  std::vector<double> ns, gaps;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const auto [n, d] = nd[i];
    const ModelConfig config(d, n, tau, rng_root);
    const PairedRisk paired = mc_risk_paired(
        config, EstimatorId::adaptive_ridge(),
        EstimatorId::ridge(RidgeParam::from_value(tau.value())), replicates,
        BetaMode::sphere_resample(), detail::derive_seed(rng_root, i), threads);
    GridPoint point;
    point.n = n;
    point.d = d;
    point.value = std::fabs(paired.gap_mean);
    point.std_error = paired.gap_std_error;
    report.grid.push_back(point);
    ns.push_back(static_cast<double>(n));
    gaps.push_back(point.value);
  }
  report.fitted_rate_exponent = fitted_loglog_slope(ns, gaps);
  return report;
}

// Prop-3(a) sandwich: the exact risk E[tr{(X^T X + d/tau^2 I)^-1}] lies
// between R_r^0(tau, d/n) and R_r^0(tau, d/(n-d-1)). The trace-MC mean is
// required to fall inside the interval widened by 3 standard errors.
struct SandwichReport {
  RiskEstimate estimate;
  double bound_at_dn = 0.0;         // R_r^0(tau, d/n)
  double bound_at_corrected = 0.0;  // R_r^0(tau, d/(n-d-1))
  bool contained = false;
};

inline SandwichReport low_dim_sandwich_check(int d, int n, SignalStrength tau,
                                             int replicates, std::uint64_t rng_root,
                                             int threads = 1) {
  if (d + 1 >= n)
    throw std::invalid_argument("low_dim_sandwich_check: requires d + 1 < n");
  const ModelConfig config(d, n, tau, rng_root);
  SandwichReport report;
  report.estimate = mc_trace_risk(config, replicates, rng_root, threads);
  report.bound_at_dn = asymptotic_risk_low_dim(tau, static_cast<double>(d) / n);
  report.bound_at_corrected =
      asymptotic_risk_low_dim(tau, static_cast<double>(d) / (n - d - 1));
  const double slack =
      std::isnan(report.estimate.std_error) ? 0.0 : 3.0 * report.estimate.std_error;
  const double lo = std::min(report.bound_at_dn, report.bound_at_corrected) - slack;
  const double hi = std::max(report.bound_at_dn, report.bound_at_corrected) + slack;
  report.contained = report.estimate.mean >= lo && report.estimate.mean <= hi;
  return report;
}

// Prop-3(b) check: for d/n >= 10 the oracle ridge risk approaches the null
// risk tau^2 from below; the MC mean must land within max(3 se, 0.1 tau^2).
struct HighDimNullReport {
  RiskEstimate estimate;
  double tau_squared = 0.0;
  double tolerance = 0.0;
  bool within = false;
};

inline HighDimNullReport high_dim_null_check(int d, int n, SignalStrength tau,
                                             int replicates, std::uint64_t rng_root,
                                             int threads = 1) {
  if (static_cast<double>(d) / n < 10.0)
    throw std::invalid_argument("high_dim_null_check: requires d/n >= 10");
  const ModelConfig config(d, n, tau, rng_root);
  HighDimNullReport report;
  report.estimate = mc_trace_risk(config, replicates, rng_root, threads);
  report.tau_squared = tau.value() * tau.value();
  const double se = std::isnan(report.estimate.std_error) ? 0.0 : report.estimate.std_error;
  report.tolerance = std::max(3.0 * se, 0.1 * report.tau_squared);
  report.within = std::fabs(report.estimate.mean - report.tau_squared) <= report.tolerance;
  return report;
}

}  // namespace hdridge
