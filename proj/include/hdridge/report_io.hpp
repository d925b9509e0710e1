#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hdridge/numeric.hpp"

namespace hdridge {

// A report cell: every emitted number goes through the same shortest
// round-trip formatting so CSV and JSON renderings carry identical values.
using Value = std::variant<std::string, double, std::int64_t, bool>;

using Field = std::pair<std::string, Value>;
using Record = std::vector<Field>;

inline constexpr const char* kReportVersion = "1";

inline std::string value_to_string(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  return std::get<bool>(v) ? "true" : "false";
}

inline const Value* find_field(const Record& record, const std::string& key) {
  for (const Field& f : record)
    if (f.first == key) return &f.second;
  return nullptr;
}

// CSV rendering: provenance as leading '# key = value' comment lines, then a
// header row over the union of record fields (first-seen order) and one line
// per record; absent fields render as empty cells.
inline void write_records_csv(std::ostream& out, const Record& provenance,
                              const std::vector<Record>& records) {
  for (const Field& f : provenance)
    out << "# " << f.first << " = " << value_to_string(f.second) << "\n";
  std::vector<std::string> columns;
  for (const Record& r : records)
    for (const Field& f : r) {
      bool seen = false;
      for (const std::string& c : columns) seen = seen || c == f.first;
      if (!seen) columns.push_back(f.first);
    }
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const Record& r : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ",";
      if (const Value* v = find_field(r, columns[c])) out << value_to_string(*v);
    }
    out << "\n";
  }
}

namespace detail {

inline nlohmann::ordered_json value_to_json(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  if (std::holds_alternative<double>(v)) {
    const double x = std::get<double>(v);
    // JSON has no inf/nan literals; fall back to the string spelling.
    if (!std::isfinite(x)) return format_double(x);
    return x;
  }
  if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
  return std::get<bool>(v);
}

inline nlohmann::ordered_json record_to_json(const Record& record) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const Field& f : record) obj[f.first] = value_to_json(f.second);
  return obj;
}

}  // namespace detail

// JSON rendering: {"version": ..., "config": {...}, "records": [...]}.
inline void write_records_json(std::ostream& out, const Record& provenance,
                               const std::vector<Record>& records) {
  nlohmann::ordered_json doc;
  doc["version"] = kReportVersion;
  doc["config"] = detail::record_to_json(provenance);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Record& r : records) arr.push_back(detail::record_to_json(r));
  doc["records"] = std::move(arr);
  out << doc.dump(2) << "\n";
}

}  // namespace hdridge
