#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdridge/dataset_io.hpp"
#include "hdridge/experiments.hpp"

namespace hdridge {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inclusive grid "start:end:count"; count = 1 requires start == end.
struct GridSpec {
  double start = 0.0;
  double end = 0.0;
  int count = 0;

  static GridSpec parse(const std::string& text) {
    GridSpec g;
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                                     : text.find(':', c1 + 1);
    double start, end;
    if (c1 == std::string::npos || c2 == std::string::npos ||
        !detail::parse_field(detail::trim(text.substr(0, c1)), start) ||
        !detail::parse_field(detail::trim(text.substr(c1 + 1, c2 - c1 - 1)), end))
      throw ConfigError("grid: expected start:end:count, got '" + text + "'");
    long long count;
    {
      const std::string_view field = detail::trim(text.substr(c2 + 1));
      const char* b = field.data();
      auto res = std::from_chars(b, b + field.size(), count);
      if (res.ec != std::errc{} || res.ptr != b + field.size())
        throw ConfigError("grid: bad count in '" + text + "'");
    }
    if (count < 1 || count > 10000000)
      throw ConfigError("grid: count out of range in '" + text + "'");
    if (count == 1 && start != end)
      throw ConfigError("grid: count 1 requires start == end in '" + text + "'");
    g.start = start;
    g.end = end;
    g.count = static_cast<int>(count);
    return g;
  }

  std::vector<double> values() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
      out[0] = start;
      return out;
    }
    for (int i = 0; i < count; ++i)
      out[static_cast<std::size_t>(i)] = start + (end - start) * i / (count - 1);
    out.back() = end;  // endpoint exactly
    return out;
  }
};

namespace detail {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;
};

inline std::vector<ConfigSection> parse_sections(std::istream& in) {
  std::vector<ConfigSection> sections;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      sections.push_back({std::string(trim(s.substr(1, s.size() - 2))), lineno, {}});
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (sections.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": entry before any [section]");
    ConfigEntry entry;
    entry.key = std::string(trim(s.substr(0, eq)));
    entry.value = std::string(trim(s.substr(eq + 1)));
    entry.line = lineno;
    if (entry.key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    sections.back().entries.push_back(std::move(entry));
  }
  return sections;
}

// Typed single-use view over a section; every key must be consumed, so
// misspelled keys are hard errors.
class SectionReader {
 public:
  explicit SectionReader(const ConfigSection& section) : section_(section) {
    used_.assign(section.entries.size(), false);
  }

  std::optional<std::string> take(const std::string& key) {
    for (std::size_t i = 0; i < section_.entries.size(); ++i) {
      if (!used_[i] && section_.entries[i].key == key) {
        used_[i] = true;
        return section_.entries[i].value;
      }
    }
    return std::nullopt;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v)
      throw ConfigError("[" + section_.name + "] (line " + std::to_string(section_.line) +
                        "): missing required key '" + key + "'");
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto v = take(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError("[" + section_.name + "]: missing required key '" + key + "'");
    }
    double out;
    if (!parse_field(*v, out))
      throw ConfigError("[" + section_.name + "] " + key + ": cannot parse number '" + *v + "'");
    return out;
  }

  std::int64_t integer(const std::string& key,
                       std::optional<std::int64_t> fallback = std::nullopt) {
    auto v = take(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError("[" + section_.name + "]: missing required key '" + key + "'");
    }
    const char* b = v->data();
    std::int64_t out;
    auto res = std::from_chars(b, b + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != b + v->size())
      throw ConfigError("[" + section_.name + "] " + key + ": cannot parse integer '" + *v + "'");
    return out;
  }

  void finish() const {
    for (std::size_t i = 0; i < section_.entries.size(); ++i)
      if (!used_[i])
        throw ConfigError("[" + section_.name + "] line " +
                          std::to_string(section_.entries[i].line) + ": unknown key '" +
                          section_.entries[i].key + "'");
  }

 private:
  const ConfigSection& section_;
  std::vector<bool> used_;
};

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view field =
        trim(text.substr(start, comma == std::string::npos ? std::string::npos
                                                           : comma - start));
    long long v;
    const char* b = field.data();
    auto res = std::from_chars(b, b + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != b + field.size() || field.empty())
      throw ConfigError(what + ": cannot parse integer list '" + text + "'");
    out.push_back(static_cast<int>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

enum class ExperimentKind {
  mc_risk,
  trace_risk,
  risk_vs_asymptotic,
  adaptive_gap,
  sandwich,
  high_dim_null,
};

inline const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::mc_risk: return "mc_risk";
    case ExperimentKind::trace_risk: return "trace_risk";
    case ExperimentKind::risk_vs_asymptotic: return "risk_vs_asymptotic";
    case ExperimentKind::adaptive_gap: return "adaptive_gap";
    case ExperimentKind::sandwich: return "sandwich";
    case ExperimentKind::high_dim_null: return "high_dim_null";
  }
  return "?";
}

struct ExperimentRequest {
  ExperimentKind kind = ExperimentKind::mc_risk;
  std::string label;
  double tau = 0.0;
  int replicates = 0;
  std::optional<std::uint64_t> seed;  // default derives from the run seed

  // mc_risk / trace_risk / sandwich / high_dim_null
  int d = 0;
  int n = 0;

  // mc_risk only
  std::string estimator;  // oracle_ridge | ridge | adaptive_ridge | ols | null
  double t = 0.0;         // ridge only

  // convergence studies
  double rho = 0.0;
  std::vector<int> n_grid;
  std::string route = "trace";  // risk_vs_asymptotic: trace | loss
  std::optional<double> slope_min, slope_max;
};

struct RunSettings {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";  // csv | json
  std::string out;             // empty: stdout
  bool strict = false;
};

struct SimulationPlan {
  RunSettings run;
  std::vector<ExperimentRequest> experiments;
};

inline EstimatorId resolve_estimator(const std::string& name, double tau, double t) {
  if (name == "oracle_ridge") return EstimatorId::ridge(RidgeParam::from_value(tau));
  if (name == "ridge") return EstimatorId::ridge(RidgeParam::from_value(t));
  if (name == "adaptive_ridge") return EstimatorId::adaptive_ridge();
  if (name == "ols") return EstimatorId::ols();
  if (name == "null") return EstimatorId::null_estimator();
  throw ConfigError("unknown estimator '" + name + "'");
}

namespace detail {

inline ExperimentRequest parse_experiment(const ConfigSection& section) {
  SectionReader reader(section);
  ExperimentRequest req;
  const std::string kind = reader.require("kind");
  req.label = reader.take("label").value_or("");
  if (auto seed = reader.take("seed")) {
    std::uint64_t v;
    const char* b = seed->data();
    auto res = std::from_chars(b, b + seed->size(), v);
    if (res.ec != std::errc{} || res.ptr != b + seed->size())
      throw ConfigError("[experiment] seed: cannot parse '" + *seed + "'");
    req.seed = v;
  }
  req.tau = reader.number("tau");
  if (req.tau < 0.0) throw ConfigError("[experiment] tau must be nonnegative");
  req.replicates = static_cast<int>(reader.integer("replicates"));
  if (req.replicates < 1) throw ConfigError("[experiment] replicates must be positive");

  auto read_dims = [&] {
    req.d = static_cast<int>(reader.integer("d"));
    req.n = static_cast<int>(reader.integer("n"));
    if (req.d < 1 || req.n < 1) throw ConfigError("[experiment] d and n must be positive");
  };
  auto read_grid = [&] {
    req.rho = reader.number("rho");
    if (!(req.rho > 0.0)) throw ConfigError("[experiment] rho must be positive");
    req.n_grid = parse_int_list(reader.require("n_grid"), "[experiment] n_grid");
    try {
      RatioGrid{req.rho, req.n_grid}.resolve();  // validates sizes and integrality
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[experiment] ") + e.what());
    }
  };

  if (kind == "mc_risk") {
    req.kind = ExperimentKind::mc_risk;
    read_dims();
    req.estimator = reader.require("estimator");
    if (req.estimator == "ridge") req.t = reader.number("t");
    resolve_estimator(req.estimator, req.tau, req.estimator == "ridge" ? req.t : 1.0);
  } else if (kind == "trace_risk") {
    req.kind = ExperimentKind::trace_risk;
    read_dims();
  } else if (kind == "risk_vs_asymptotic") {
    req.kind = ExperimentKind::risk_vs_asymptotic;
    read_grid();
    req.route = reader.take("route").value_or("trace");
    if (req.route != "trace" && req.route != "loss")
      throw ConfigError("[experiment] route must be 'trace' or 'loss'");
    if (auto v = reader.take("slope_min")) {
      double x;
      if (!parse_field(*v, x)) throw ConfigError("[experiment] slope_min: bad number");
      req.slope_min = x;
    }
    if (auto v = reader.take("slope_max")) {
      double x;
      if (!parse_field(*v, x)) throw ConfigError("[experiment] slope_max: bad number");
      req.slope_max = x;
    }
    if (std::fabs(req.rho - 1.0) < 0.1)
      throw ConfigError("[experiment] risk_vs_asymptotic requires |rho - 1| >= 0.1");
  } else if (kind == "adaptive_gap") {
    req.kind = ExperimentKind::adaptive_gap;
    read_grid();
    for (int n : req.n_grid) {
      const int d = static_cast<int>(std::llround(req.rho * n));
      if (std::abs(n - d) <= 9 || n <= 8)
        throw ConfigError("[experiment] adaptive_gap requires |n - d| > 9 and n > 8");
    }
  } else if (kind == "sandwich") {
    req.kind = ExperimentKind::sandwich;
    read_dims();
    if (req.d + 1 >= req.n) throw ConfigError("[experiment] sandwich requires d + 1 < n");
  } else if (kind == "high_dim_null") {
    req.kind = ExperimentKind::high_dim_null;
    read_dims();
    if (static_cast<double>(req.d) / req.n < 10.0)
      throw ConfigError("[experiment] high_dim_null requires d/n >= 10");
  } else {
    throw ConfigError("[experiment] unknown kind '" + kind + "'");
  }
  reader.finish();
  return req;
}

}  // namespace detail

// Parses a simulation plan: an optional [run] section followed by
// [experiment] sections. All parameters are validated here, before any
// computation starts.
inline SimulationPlan parse_simulation_plan(std::istream& in) {
  SimulationPlan plan;
  bool saw_run = false;
  for (const auto& section : detail::parse_sections(in)) {
    if (section.name == "run") {
      if (saw_run) throw ConfigError("duplicate [run] section");
      saw_run = true;
      detail::SectionReader reader(section);
      plan.run.seed = static_cast<std::uint64_t>(reader.integer("seed", 0));
      plan.run.threads = static_cast<int>(reader.integer("threads", 1));
      if (plan.run.threads < 1) throw ConfigError("[run] threads must be positive");
      plan.run.format = reader.take("format").value_or("csv");
      if (plan.run.format != "csv" && plan.run.format != "json")
        throw ConfigError("[run] format must be 'csv' or 'json'");
      plan.run.out = reader.take("out").value_or("");
      const std::string strict = reader.take("strict").value_or("false");
      if (strict != "true" && strict != "false")
        throw ConfigError("[run] strict must be 'true' or 'false'");
      plan.run.strict = strict == "true";
      reader.finish();
    } else if (section.name == "experiment") {
      plan.experiments.push_back(detail::parse_experiment(section));
    } else {
      throw ConfigError("line " + std::to_string(section.line) + ": unknown section [" +
                        section.name + "]");
    }
  }
  if (plan.experiments.empty())
    throw ConfigError("simulation plan declares no [experiment] sections");
  return plan;
}

inline SimulationPlan load_simulation_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file " + path.string());
  return parse_simulation_plan(in);
}

}  // namespace hdridge
