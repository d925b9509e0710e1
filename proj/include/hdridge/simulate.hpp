#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hdridge/experiment_config.hpp"
#include "hdridge/experiments.hpp"
#include "hdridge/report_io.hpp"

namespace hdridge {

struct SimulationResult {
  Record provenance;
  std::vector<Record> records;
  bool all_checks_passed = true;
};

namespace detail {

inline double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline Record base_record(const ExperimentRequest& req, std::uint64_t seed) {
  Record r;
  r.emplace_back("kind", std::string(experiment_kind_name(req.kind)));
  if (!req.label.empty()) r.emplace_back("label", req.label);
  r.emplace_back("tau", req.tau);
  r.emplace_back("replicates", static_cast<std::int64_t>(req.replicates));
  r.emplace_back("seed", std::to_string(seed));
  return r;
}

}  // namespace detail

// Runs every experiment in the plan; statistical check failures are recorded
// in the result, never thrown.
inline SimulationResult run_simulation(const SimulationPlan& plan) {
  SimulationResult result;
  result.provenance.emplace_back("command", std::string("simulate"));
  result.provenance.emplace_back("seed", std::to_string(plan.run.seed));
  result.provenance.emplace_back("threads", static_cast<std::int64_t>(plan.run.threads));
  result.provenance.emplace_back("strict", plan.run.strict);
  result.provenance.emplace_back("experiments",
                                 static_cast<std::int64_t>(plan.experiments.size()));

  for (std::size_t i = 0; i < plan.experiments.size(); ++i) {
    const ExperimentRequest& req = plan.experiments[i];
    const std::uint64_t seed =
        req.seed ? *req.seed : detail::derive_seed(plan.run.seed, i);
    const SignalStrength tau(req.tau);
    const auto start = std::chrono::steady_clock::now();

    auto push_check = [&](Record& r, const std::string& name, bool pass) {
      r.emplace_back("check", name);
      r.emplace_back("check_pass", pass);
      result.all_checks_passed = result.all_checks_passed && pass;
    };

    switch (req.kind) {
      case ExperimentKind::mc_risk: {
        const ModelConfig config(req.d, req.n, tau, seed);
        const EstimatorId estimator = resolve_estimator(req.estimator, req.tau, req.t);
        const ExperimentSpec spec{config, estimator, req.replicates,
                                  BetaMode::sphere_resample()};
        const RiskEstimate est = mc_risk(spec, seed, plan.run.threads);
        Record r = detail::base_record(req, seed);
        r.emplace_back("estimator", req.estimator);
        r.emplace_back("functional", std::string(risk_functional_name(est.functional)));
        r.emplace_back("n", static_cast<std::int64_t>(req.n));
        r.emplace_back("d", static_cast<std::int64_t>(req.d));
        r.emplace_back("mean", est.mean);
        r.emplace_back("std_error", est.std_error);
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
      case ExperimentKind::trace_risk: {
        const ModelConfig config(req.d, req.n, tau, seed);
        const RiskEstimate est = mc_trace_risk(config, req.replicates, seed, plan.run.threads);
        Record r = detail::base_record(req, seed);
        r.emplace_back("functional", std::string(risk_functional_name(est.functional)));
        r.emplace_back("n", static_cast<std::int64_t>(req.n));
        r.emplace_back("d", static_cast<std::int64_t>(req.d));
        r.emplace_back("mean", est.mean);
        r.emplace_back("std_error", est.std_error);
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
      case ExperimentKind::risk_vs_asymptotic: {
        const RatioGrid grid{req.rho, req.n_grid};
        const RiskFunctional route = req.route == "trace" ? RiskFunctional::trace_mc
                                                          : RiskFunctional::loss_mc;
        const ConvergenceReport report =
            risk_vs_asymptotic(grid, tau, req.replicates, seed, route, plan.run.threads);
        for (const GridPoint& p : report.grid) {
          Record r = detail::base_record(req, seed);
          r.emplace_back("rho", req.rho);
          r.emplace_back("route", req.route);
          r.emplace_back("n", static_cast<std::int64_t>(p.n));
          r.emplace_back("d", static_cast<std::int64_t>(p.d));
          r.emplace_back("gap", p.value);
          r.emplace_back("std_error", p.std_error);
          result.records.push_back(std::move(r));
        }
        Record r = detail::base_record(req, seed);
        r.emplace_back("rho", req.rho);
        r.emplace_back("route", req.route);
        r.emplace_back("fitted_exponent", report.fitted_rate_exponent);
        r.emplace_back("reference_exponent", report.reference_exponent);
        if (req.slope_min || req.slope_max) {
          const double lo = req.slope_min.value_or(-std::numeric_limits<double>::infinity());
          const double hi = req.slope_max.value_or(std::numeric_limits<double>::infinity());
          const double s = report.fitted_rate_exponent;
          push_check(r, "slope_in_range", std::isfinite(s) && s >= lo && s <= hi);
        }
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
      case ExperimentKind::adaptive_gap: {
        const RatioGrid grid{req.rho, req.n_grid};
        const ConvergenceReport report =
            adaptive_gap_study(grid, tau, req.replicates, seed, plan.run.threads);
        bool monotone = true;
        for (std::size_t k = 1; k < report.grid.size(); ++k)
          monotone = monotone && report.grid[k].value < report.grid[k - 1].value;
        for (const GridPoint& p : report.grid) {
          Record r = detail::base_record(req, seed);
          r.emplace_back("rho", req.rho);
          r.emplace_back("n", static_cast<std::int64_t>(p.n));
          r.emplace_back("d", static_cast<std::int64_t>(p.d));
          r.emplace_back("gap", p.value);
          r.emplace_back("std_error", p.std_error);
          result.records.push_back(std::move(r));
        }
        Record r = detail::base_record(req, seed);
        r.emplace_back("rho", req.rho);
        r.emplace_back("fitted_exponent", report.fitted_rate_exponent);
        r.emplace_back("reference_exponent", report.reference_exponent);
        push_check(r, "gap_strictly_decreasing", monotone);
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
      case ExperimentKind::sandwich: {
        const SandwichReport report = low_dim_sandwich_check(
            req.d, req.n, tau, req.replicates, seed, plan.run.threads);
        Record r = detail::base_record(req, seed);
        r.emplace_back("n", static_cast<std::int64_t>(req.n));
        r.emplace_back("d", static_cast<std::int64_t>(req.d));
        r.emplace_back("mean", report.estimate.mean);
        r.emplace_back("std_error", report.estimate.std_error);
        r.emplace_back("bound_at_dn", report.bound_at_dn);
        r.emplace_back("bound_at_corrected", report.bound_at_corrected);
        push_check(r, "contained", report.contained);
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
      case ExperimentKind::high_dim_null: {
        const HighDimNullReport report = high_dim_null_check(
            req.d, req.n, tau, req.replicates, seed, plan.run.threads);
        Record r = detail::base_record(req, seed);
        r.emplace_back("n", static_cast<std::int64_t>(req.n));
        r.emplace_back("d", static_cast<std::int64_t>(req.d));
        r.emplace_back("mean", report.estimate.mean);
        r.emplace_back("std_error", report.estimate.std_error);
        r.emplace_back("tau_squared", report.tau_squared);
        r.emplace_back("tolerance", report.tolerance);
        push_check(r, "within_tolerance", report.within);
        r.emplace_back("wall_time_s", detail::elapsed_seconds(start));
        result.records.push_back(std::move(r));
        break;
      }
    }
  }
  return result;
}

}  // namespace hdridge
