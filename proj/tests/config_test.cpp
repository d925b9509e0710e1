#include "hdridge/experiment_config.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "hdridge/report_io.hpp"
#include "hdridge/simulate.hpp"

namespace hdridge {
namespace {

TEST(GridSpec, InclusiveEndpointsAndCount) {
  const GridSpec g = GridSpec::parse("0:4:101");
  const std::vector<double> v = g.values();
  ASSERT_EQ(v.size(), 101u);
  EXPECT_DOUBLE_EQ(v.front(), 0.0);
  EXPECT_DOUBLE_EQ(v.back(), 4.0);
  EXPECT_DOUBLE_EQ(v[50], 2.0);

  const std::vector<double> single = GridSpec::parse("2.5:2.5:1").values();
  ASSERT_EQ(single.size(), 1u);
  EXPECT_DOUBLE_EQ(single[0], 2.5);

  const std::vector<double> neg = GridSpec::parse("-5:-0.1:50").values();
  EXPECT_DOUBLE_EQ(neg.front(), -5.0);
  EXPECT_DOUBLE_EQ(neg.back(), -0.1);
}

TEST(GridSpec, RejectsMalformedSpecs) {
  EXPECT_THROW(GridSpec::parse("0:4"), ConfigError);
  EXPECT_THROW(GridSpec::parse("0:4:0"), ConfigError);
  EXPECT_THROW(GridSpec::parse("a:4:3"), ConfigError);
  EXPECT_THROW(GridSpec::parse("0:4:two"), ConfigError);
  EXPECT_THROW(GridSpec::parse("1:2:1"), ConfigError);
}

TEST(SimulationPlan, ParsesRunAndExperiments) {
  std::istringstream in(R"(
# comment
[run]
seed = 7
threads = 2
format = json

[experiment]
kind = mc_risk
estimator = ridge
t = 0.5
tau = 1.0
d = 4
n = 8
replicates = 10

[experiment]
kind = risk_vs_asymptotic
tau = 1.0
rho = 0.5
n_grid = 20, 40, 80
replicates = 5
route = loss
slope_min = -1.0
slope_max = -0.2
)");
  const SimulationPlan plan = parse_simulation_plan(in);
  EXPECT_EQ(plan.run.seed, 7u);
  EXPECT_EQ(plan.run.threads, 2);
  EXPECT_EQ(plan.run.format, "json");
  ASSERT_EQ(plan.experiments.size(), 2u);
  EXPECT_EQ(plan.experiments[0].kind, ExperimentKind::mc_risk);
  EXPECT_DOUBLE_EQ(plan.experiments[0].t, 0.5);
  EXPECT_EQ(plan.experiments[1].kind, ExperimentKind::risk_vs_asymptotic);
  EXPECT_EQ(plan.experiments[1].n_grid, (std::vector<int>{20, 40, 80}));
  EXPECT_EQ(plan.experiments[1].route, "loss");
  ASSERT_TRUE(plan.experiments[1].slope_min.has_value());
  EXPECT_DOUBLE_EQ(*plan.experiments[1].slope_min, -1.0);
}

TEST(SimulationPlan, UnknownKeysAndSectionsAreHardErrors) {
  {
    std::istringstream in("[experiment]\nkind = mc_risk\nestimator = ols\ntau = 1\n"
                          "d = 2\nn = 4\nreplicates = 3\nbogus_key = 1\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {
    std::istringstream in("[mystery]\nx = 1\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {
    std::istringstream in("key_before_section = 1\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // no experiments
    std::istringstream in("[run]\nseed = 1\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
}

TEST(SimulationPlan, ValidatesPreconditionsBeforeWork) {
  {  // sandwich needs d + 1 < n
    std::istringstream in("[experiment]\nkind = sandwich\ntau = 1\nd = 10\nn = 11\nreplicates = 5\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // high_dim_null needs d/n >= 10
    std::istringstream in("[experiment]\nkind = high_dim_null\ntau = 1\nd = 50\nn = 10\nreplicates = 5\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // adaptive_gap theorem conditions
    std::istringstream in(
        "[experiment]\nkind = adaptive_gap\ntau = 1\nrho = 0.9\nn_grid = 20,40,80\nreplicates = 5\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // risk_vs_asymptotic near-one guard
    std::istringstream in(
        "[experiment]\nkind = risk_vs_asymptotic\ntau = 1\nrho = 0.95\nn_grid = 20,40,80\nreplicates = 5\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // non-integral rho * n
    std::istringstream in(
        "[experiment]\nkind = risk_vs_asymptotic\ntau = 1\nrho = 0.5\nn_grid = 21,40,80\nreplicates = 5\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
  {  // unknown estimator
    std::istringstream in(
        "[experiment]\nkind = mc_risk\nestimator = lasso\ntau = 1\nd = 2\nn = 4\nreplicates = 3\n");
    EXPECT_THROW(parse_simulation_plan(in), ConfigError);
  }
}

TEST(ReportIo, CsvAndJsonCarryIdenticalNumbers) {
  Record provenance;
  provenance.emplace_back("command", std::string("test"));
  provenance.emplace_back("seed", std::string("42"));
  std::vector<Record> records;
  Record r1;
  r1.emplace_back("n", static_cast<std::int64_t>(100));
  r1.emplace_back("mean", 0.1234567890123456789);
  r1.emplace_back("std_error", 1.0 / 3.0);
  records.push_back(r1);
  Record r2;
  r2.emplace_back("n", static_cast<std::int64_t>(200));
  r2.emplace_back("mean", 6.02214076e23);
  r2.emplace_back("extra", true);
  records.push_back(r2);

  std::ostringstream csv, json;
  write_records_csv(csv, provenance, records);
  write_records_json(json, provenance, records);

  // Parse both renderings back and compare every numeric cell exactly (17
  // significant digits is bit-exact for doubles).
  const auto doc = nlohmann::json::parse(json.str());
  ASSERT_EQ(doc.at("records").size(), 2u);
  std::istringstream csv_in(csv.str());
  std::string line;
  std::vector<std::string> data_lines;
  while (std::getline(csv_in, line))
    if (!line.empty() && line[0] != '#') data_lines.push_back(line);
  ASSERT_EQ(data_lines.size(), 3u);  // header + 2 rows
  EXPECT_EQ(data_lines[0], "n,mean,std_error,extra");

  auto cell = [&](const std::string& row, int index) {
    std::istringstream ss(row);
    std::string field;
    for (int i = 0; i <= index; ++i) std::getline(ss, field, ',');
    return field;
  };
  EXPECT_EQ(std::stod(cell(data_lines[1], 1)), doc["records"][0]["mean"].get<double>());
  EXPECT_EQ(std::stod(cell(data_lines[1], 2)),
            doc["records"][0]["std_error"].get<double>());
  EXPECT_EQ(std::stod(cell(data_lines[2], 1)), doc["records"][1]["mean"].get<double>());
  // Missing fields render as empty CSV cells and are absent from JSON.
  EXPECT_EQ(cell(data_lines[1], 3), "");
  EXPECT_FALSE(doc["records"][0].contains("extra"));
}

TEST(ReportIo, NonFiniteDoublesSpelledOut) {
  std::vector<Record> records;
  Record r;
  r.emplace_back("slope", std::numeric_limits<double>::quiet_NaN());
  r.emplace_back("limit", std::numeric_limits<double>::infinity());
  records.push_back(r);
  std::ostringstream csv, json;
  write_records_csv(csv, {}, records);
  write_records_json(json, {}, records);
  EXPECT_NE(csv.str().find("nan,inf"), std::string::npos);
  const auto doc = nlohmann::json::parse(json.str());
  EXPECT_EQ(doc["records"][0]["slope"].get<std::string>(), "nan");
  EXPECT_EQ(doc["records"][0]["limit"].get<std::string>(), "inf");
}

TEST(RunSimulation, ChecksAreReportedNotThrown) {
  std::istringstream in(R"(
[run]
seed = 5
threads = 2

[experiment]
kind = sandwich
tau = 1.0
d = 10
n = 200
replicates = 60

[experiment]
kind = high_dim_null
tau = 1.0
d = 200
n = 20
replicates = 60
)");
  const SimulationPlan plan = parse_simulation_plan(in);
  const SimulationResult result = run_simulation(plan);
  ASSERT_EQ(result.records.size(), 2u);
  for (const Record& r : result.records) {
    const Value* pass = find_field(r, "check_pass");
    ASSERT_NE(pass, nullptr);
    EXPECT_TRUE(std::get<bool>(*pass));
  }
  EXPECT_TRUE(result.all_checks_passed);
}

TEST(RunSimulation, DeterministicAcrossThreadCounts) {
  const std::string plan_text = R"(
[experiment]
kind = mc_risk
estimator = adaptive_ridge
tau = 1.0
d = 15
n = 30
replicates = 40

[experiment]
kind = trace_risk
tau = 1.0
d = 10
n = 20
replicates = 40
)";
  auto run_with_threads = [&](int threads) {
    std::istringstream in(plan_text);
    SimulationPlan plan = parse_simulation_plan(in);
    plan.run.seed = 99;
    plan.run.threads = threads;
    return run_simulation(plan);
  };
  const SimulationResult a = run_with_threads(1);
  const SimulationResult b = run_with_threads(8);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const double mean_a = std::get<double>(*find_field(a.records[i], "mean"));
    const double mean_b = std::get<double>(*find_field(b.records[i], "mean"));
    EXPECT_EQ(mean_a, mean_b);
    const double se_a = std::get<double>(*find_field(a.records[i], "std_error"));
    const double se_b = std::get<double>(*find_field(b.records[i], "std_error"));
    EXPECT_EQ(se_a, se_b);
  }
}

}  // namespace
}  // namespace hdridge
