// hdridge command-line frontend: MP law tables, asymptotic risk curves,
// Monte Carlo experiment plans, dataset fitting, and spectral summaries.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hdridge/dataset_io.hpp"
#include "hdridge/estimators.hpp"
#include "hdridge/experiment_config.hpp"
#include "hdridge/model.hpp"
#include "hdridge/mp_law.hpp"
#include "hdridge/report_io.hpp"
#include "hdridge/simulate.hpp"
#include "hdridge/spectra.hpp"

namespace {

using namespace hdridge;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
  std::string out;
  bool strict = false;
};

void add_global_opts(CLI::App* cmd, GlobalOpts& opts) {
  cmd->add_option("--seed", opts.seed, "RNG root seed");
  cmd->add_option("--threads", opts.threads, "worker threads for replicates")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opts.out, "output path (default: stdout)");
  cmd->add_flag("--strict", opts.strict, "exit nonzero when a statistical check fails");
}

void emit(const GlobalOpts& opts, const Record& provenance,
          const std::vector<Record>& records) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!opts.out.empty()) {
    file.open(opts.out);
    if (!file) throw std::runtime_error("cannot open output file " + opts.out);
    out = &file;
  }
  if (opts.format == "json")
    write_records_json(*out, provenance, records);
  else
    write_records_csv(*out, provenance, records);
}

Record common_provenance(const std::string& command, const GlobalOpts& opts) {
  Record p;
  p.emplace_back("command", command);
  p.emplace_back("seed", std::to_string(opts.seed));
  p.emplace_back("threads", static_cast<std::int64_t>(opts.threads));
  return p;
}

int cmd_mp(const GlobalOpts& opts, double rho, const std::string& z_grid,
           const std::string& s_grid, bool stieltjes) {
  const AspectRatio ratio(rho);
  Record provenance = common_provenance("mp", opts);
  provenance.emplace_back("rho", rho);

  std::vector<Record> records;
  if (stieltjes) {
    provenance.emplace_back("s_grid", s_grid);
    for (double s : GridSpec::parse(s_grid).values()) {
      Record r;
      r.emplace_back("s", s);
      r.emplace_back("stieltjes", mp_stieltjes(ratio, s));
      records.push_back(std::move(r));
    }
  } else {
    provenance.emplace_back("z_grid", z_grid);
    const MPSupport support = mp_support(ratio);
    provenance.emplace_back("support_a", support.a);
    provenance.emplace_back("support_b", support.b);
    provenance.emplace_back("point_mass_at_zero", support.point_mass_at_zero);
    for (double z : GridSpec::parse(z_grid).values()) {
      Record r;
      r.emplace_back("z", z);
      r.emplace_back("density", mp_density(ratio, z));
      r.emplace_back("cdf", mp_cdf(ratio, z));
      records.push_back(std::move(r));
    }
  }
  emit(opts, provenance, records);
  return 0;
}

int cmd_risk_curve(const GlobalOpts& opts, const std::string& tau_grid,
                   const std::string& rho_grid, bool include_inf) {
  Record provenance = common_provenance("risk-curve", opts);
  provenance.emplace_back("tau_grid", tau_grid);
  provenance.emplace_back("rho_grid", rho_grid);
  provenance.emplace_back("include_inf", include_inf);

  std::vector<Record> records;
  for (double tau : GridSpec::parse(tau_grid).values()) {
    const SignalStrength t(tau);
    for (double rho : GridSpec::parse(rho_grid).values()) {
      Record r;
      r.emplace_back("tau", tau);
      r.emplace_back("rho", rho);
      r.emplace_back("risk_mp", asymptotic_risk(t, rho == 0.0 ? RhoLimit::zero()
                                                              : RhoLimit::finite(rho)));
      r.emplace_back("risk_low_dim", asymptotic_risk_low_dim(t, rho));
      records.push_back(std::move(r));
    }
    if (include_inf) {
      Record r;
      r.emplace_back("tau", tau);
      r.emplace_back("rho", std::string("inf"));
      r.emplace_back("risk_mp", asymptotic_risk(t, RhoLimit::infinity()));
      r.emplace_back("risk_low_dim", tau * tau);  // limit of rho tau^2/(rho + tau^2)
      records.push_back(std::move(r));
    }
  }
  emit(opts, provenance, records);
  return 0;
}

int cmd_simulate(const GlobalOpts& opts, const std::string& plan_path,
                 const CLI::App* cmd) {
  SimulationPlan plan = load_simulation_plan(plan_path);
  // Command-line flags override plan [run] values.
  if (cmd->count("--seed")) plan.run.seed = opts.seed;
  if (cmd->count("--threads")) plan.run.threads = opts.threads;
  if (cmd->count("--format")) plan.run.format = opts.format;
  if (cmd->count("--out")) plan.run.out = opts.out;
  if (cmd->count("--strict")) plan.run.strict = true;

  const SimulationResult result = run_simulation(plan);

  GlobalOpts out_opts = opts;
  out_opts.seed = plan.run.seed;
  out_opts.threads = plan.run.threads;
  out_opts.format = plan.run.format;
  out_opts.out = plan.run.out;
  Record provenance = result.provenance;
  provenance.emplace_back("plan_file", plan_path);
  emit(out_opts, provenance, result.records);

  if (plan.run.strict && !result.all_checks_passed) {
    std::cerr << "simulate: statistical check failed (strict mode)\n";
    return 3;
  }
  return 0;
}

int cmd_fit(const GlobalOpts& opts, const std::string& data_path,
            const std::string& estimator, double t_value) {
  const DataSet data = load_dataset(data_path);
  Estimate est{Eigen::VectorXd(), EstimatorId::ols(), std::nullopt};
  double chosen_t = 0.0;
  if (estimator == "ridge") {
    const RidgeParam t = RidgeParam::from_value(t_value);
    est = ridge(data, t);
    chosen_t = t.value();
  } else if (estimator == "ols") {
    est = ols(data);
    chosen_t = std::numeric_limits<double>::infinity();
  } else if (estimator == "null") {
    est = null_estimate(static_cast<int>(data.d()));
  } else if (estimator == "adaptive") {
    est = adaptive_ridge(data);
    chosen_t = est.tau_hat.value();
  } else {
    throw std::runtime_error("fit: unknown estimator '" + estimator + "'");
  }

  Record provenance = common_provenance("fit", opts);
  provenance.emplace_back("dataset", data_path);
  provenance.emplace_back("estimator", estimator);
  provenance.emplace_back("n", static_cast<std::int64_t>(data.n()));
  provenance.emplace_back("d", static_cast<std::int64_t>(data.d()));
  provenance.emplace_back("t", chosen_t);
  if (est.tau_hat) provenance.emplace_back("tau_hat", *est.tau_hat);
  provenance.emplace_back("residual_norm", (data.y - data.x * est.beta_hat).norm());

  std::vector<Record> records;
  for (Eigen::Index j = 0; j < est.beta_hat.size(); ++j) {
    Record r;
    r.emplace_back("index", static_cast<std::int64_t>(j + 1));
    r.emplace_back("beta_hat", est.beta_hat[j]);
    records.push_back(std::move(r));
  }
  emit(opts, provenance, records);
  return 0;
}

int cmd_spectra(const GlobalOpts& opts, int d, int n, double tau) {
  const ModelConfig config(d, n, SignalStrength(tau), opts.seed);
  RngStream rng(config.seed);
  const SphereSample sphere = sample_sphere(d, config.tau, rng);
  const DataSet data = generate(config, sphere.beta, rng);
  const SpectralSummary spec = spectrum(data);

  Record provenance = common_provenance("spectra", opts);
  provenance.emplace_back("d", static_cast<std::int64_t>(d));
  provenance.emplace_back("n", static_cast<std::int64_t>(n));
  provenance.emplace_back("tau", tau);
  provenance.emplace_back("zero_count", static_cast<std::int64_t>(spec.zero_count()));
  provenance.emplace_back("ks_distance", esd_kolmogorov_distance(spec));
  provenance.emplace_back("exact_ridge_risk", exact_ridge_risk(spec, config.tau));

  std::vector<Record> records;
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
    Record r;
    r.emplace_back("index", static_cast<std::int64_t>(j + 1));
    r.emplace_back("eigenvalue", spec.eigenvalues[j]);
    records.push_back(std::move(r));
  }
  emit(opts, provenance, records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ridge regression risk theory at desk scale"};
  app.require_subcommand(1);

  GlobalOpts mp_opts, curve_opts, sim_opts, fit_opts, spectra_opts;

  // mp
  double mp_rho = 0.0;
  std::string z_grid = "0:5:101", s_grid = "-5:-0.1:50";
  bool stieltjes = false;
  CLI::App* mp_cmd = app.add_subcommand("mp", "Marchenko-Pastur density, CDF, Stieltjes tables");
  mp_cmd->add_option("--rho", mp_rho, "aspect ratio d/n limit")->required();
  mp_cmd->add_option("--z-grid", z_grid, "density/cdf grid start:end:count");
  mp_cmd->add_option("--s-grid", s_grid, "Stieltjes grid start:end:count (s < 0)");
  mp_cmd->add_flag("--stieltjes", stieltjes, "emit the (s, stieltjes) table instead");
  add_global_opts(mp_cmd, mp_opts);

  // risk-curve
  std::string tau_grid, rho_grid;
  bool no_inf = false;
  CLI::App* curve_cmd =
      app.add_subcommand("risk-curve", "asymptotic oracle-ridge risk tables");
  curve_cmd->add_option("--tau-grid", tau_grid, "signal strengths start:end:count")->required();
  curve_cmd->add_option("--rho-grid", rho_grid, "aspect ratios start:end:count")->required();
  curve_cmd->add_flag("--no-inf-row", no_inf, "omit the rho = inf row");
  add_global_opts(curve_cmd, curve_opts);

  // simulate
  std::string plan_path;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo experiment plan");
  sim_cmd->add_option("plan", plan_path, "experiment plan file")
      ->required()
      ->check(CLI::ExistingFile);
  add_global_opts(sim_cmd, sim_opts);

  // fit
  std::string data_path, estimator = "adaptive";
  double t_value = 0.0;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit an estimator to a CSV dataset");
  fit_cmd->add_option("dataset", data_path, "CSV dataset (y, x1..xd)")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--estimator", estimator, "ridge | ols | null | adaptive")
      ->check(CLI::IsMember({"ridge", "ols", "null", "adaptive"}));
  fit_cmd->add_option("--t", t_value, "ridge parameter t (signal scale)");
  add_global_opts(fit_cmd, fit_opts);

  // spectra
  int spec_d = 0, spec_n = 0;
  double spec_tau = 1.0;
  CLI::App* spectra_cmd =
      app.add_subcommand("spectra", "eigenvalues and ESD diagnostics for one draw");
  spectra_cmd->add_option("--d", spec_d, "predictor dimension")->required()
      ->check(CLI::PositiveNumber);
  spectra_cmd->add_option("--n", spec_n, "sample count")->required()
      ->check(CLI::PositiveNumber);
  spectra_cmd->add_option("--tau", spec_tau, "signal strength for the risk column");
  add_global_opts(spectra_cmd, spectra_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mp_cmd->parsed()) return cmd_mp(mp_opts, mp_rho, z_grid, s_grid, stieltjes);
    if (curve_cmd->parsed()) return cmd_risk_curve(curve_opts, tau_grid, rho_grid, !no_inf);
    if (sim_cmd->parsed()) return cmd_simulate(sim_opts, plan_path, sim_cmd);
    if (fit_cmd->parsed()) return cmd_fit(fit_opts, data_path, estimator, t_value);
    if (spectra_cmd->parsed()) return cmd_spectra(spectra_opts, spec_d, spec_n, spec_tau);
  } catch (const std::exception& e) {
    std::cerr << "hdridge: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
