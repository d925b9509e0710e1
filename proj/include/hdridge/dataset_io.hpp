#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdridge/model.hpp"
#include "hdridge/numeric.hpp"

namespace hdridge {

enum class DatasetFormat { csv };

struct DatasetIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

inline bool parse_field(std::string_view field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && !field.empty();
}

}  // namespace detail

// Dataset CSV format: first column y, remaining d columns X; optional header
// row "y,x1,...,xd"; '.' decimal separator, no thousands separators.
inline DataSet load_dataset(const std::filesystem::path& path,
                            DatasetFormat format = DatasetFormat::csv) {
  if (format != DatasetFormat::csv)
    throw DatasetIoError("load_dataset: unsupported format");
  std::ifstream in(path);
  if (!in) throw DatasetIoError("load_dataset: cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  int data_row = 0;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_csv(trimmed);
    double probe;
    if (first && !detail::parse_field(fields[0], probe)) {
      // Header row; record the declared width and move on.
      width = fields.size();
      first = false;
      continue;
    }
    first = false;
    ++data_row;
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw DatasetIoError("load_dataset: row " + std::to_string(data_row) +
                           " has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(width));
    std::vector<double> values(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!detail::parse_field(fields[j], values[j]))
        throw DatasetIoError("load_dataset: row " + std::to_string(data_row) +
                             ": cannot parse field " + std::to_string(j + 1));
      if (!std::isfinite(values[j]))
        throw DatasetIoError("load_dataset: row " + std::to_string(data_row) +
                             ": non-finite value in field " + std::to_string(j + 1));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DatasetIoError("load_dataset: no data rows in " + path.string());
  if (width < 2)
    throw DatasetIoError("load_dataset: need a response column and at least one predictor");

  DataSet data;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(width - 1);
  data.x.resize(n, d);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.y[i] = rows[static_cast<std::size_t>(i)][0];
    for (Eigen::Index j = 0; j < d; ++j)
      data.x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) + 1];
  }
  return data;
}

inline void write_dataset(const std::filesystem::path& path, const DataSet& data,
                          DatasetFormat format = DatasetFormat::csv) {
  if (format != DatasetFormat::csv)
    throw DatasetIoError("write_dataset: unsupported format");
  validate_shapes(data);
  std::ofstream out(path);
  if (!out) throw DatasetIoError("write_dataset: cannot open " + path.string());
  out << "y";
  for (Eigen::Index j = 0; j < data.d(); ++j) out << ",x" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << format_double(data.y[i]);
    for (Eigen::Index j = 0; j < data.d(); ++j) out << "," << format_double(data.x(i, j));
    out << "\n";
  }
  if (!out) throw DatasetIoError("write_dataset: write failed for " + path.string());
}

}  // namespace hdridge
