#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fairpost/errors.hpp"

namespace fairpost {

// Outcome samples keyed by group label. Each group holds an n_z x k matrix,
// one sample per row; all groups share the same outcome dimension k.
// Instances are immutable after construction and always hold at least two
// non-empty groups with finite entries.
class GroupedDataset {
 public:
  static GroupedDataset from_groups(std::map<std::string, Eigen::MatrixXd> groups) {
    if (groups.size() < 2)
      throw ValidationError("dataset needs at least two groups, got " +
                            std::to_string(groups.size()));
    Eigen::Index k = -1;
    Eigen::Index total = 0;
    for (const auto& [label, mat] : groups) {
      if (mat.rows() == 0)
        throw ValidationError("group '" + label + "' is empty");
      if (k < 0) k = mat.cols();
      if (mat.cols() != k)
        throw DimensionError("group '" + label + "' has " +
                             std::to_string(mat.cols()) + " outcome columns, expected " +
                             std::to_string(k));
      if (!mat.allFinite())
        throw ValidationError("group '" + label + "' contains non-finite values");
      total += mat.rows();
    }
    if (k == 0) throw DimensionError("outcome dimension is zero");
    return GroupedDataset(std::move(groups), k, total);
  }

  const std::map<std::string, Eigen::MatrixXd>& groups() const { return groups_; }

  const Eigen::MatrixXd& group(const std::string& label) const {
    auto it = groups_.find(label);
    if (it == groups_.end())
      throw LookupError("unknown group label '" + label + "'");
    return it->second;
  }

  bool has_group(const std::string& label) const {
    return groups_.count(label) != 0;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(groups_.size());
    for (const auto& [label, mat] : groups_) out.push_back(label);
    return out;
  }

  Eigen::Index k() const { return k_; }
  Eigen::Index total_n() const { return total_n_; }

 private:
  GroupedDataset(std::map<std::string, Eigen::MatrixXd> groups, Eigen::Index k,
                 Eigen::Index total)
      : groups_(std::move(groups)), k_(k), total_n_(total) {}

  std::map<std::string, Eigen::MatrixXd> groups_;
  Eigen::Index k_;
  Eigen::Index total_n_;
};

// Empirical group weights lambda_z = n_z / n. Sums to 1 up to rounding.
inline std::map<std::string, double> group_weights(const GroupedDataset& ds) {
  std::map<std::string, double> w;
  const double n = static_cast<double>(ds.total_n());
  for (const auto& [label, mat] : ds.groups())
    w[label] = static_cast<double>(mat.rows()) / n;
  return w;
}

// Ascending copy of a one-column sample matrix.
inline Eigen::VectorXd sorted_quantiles(const Eigen::MatrixXd& column) {
  if (column.cols() != 1)
    throw DimensionError("sorted_quantiles expects a single column, got " +
                         std::to_string(column.cols()));
  Eigen::VectorXd v = column.col(0);
  std::sort(v.begin(), v.end());
  return v;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

// 17 significant digits round-trips IEEE doubles exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Reads a headered CSV into groups. Column order in the file is irrelevant;
// the outcome matrix columns follow the order of outcome_cols. Rows keep
// their file order within each group.
inline GroupedDataset load_csv(const std::string& path,
                               const std::vector<std::string>& outcome_cols,
                               const std::string& group_col) {
  if (outcome_cols.empty())
    throw ValidationError("no outcome columns requested");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line))
    throw SchemaError("'" + path + "' is empty");
  std::vector<std::string> header = detail::split_csv_line(line);

  auto col_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw SchemaError("column '" + name + "' not found in '" + path + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  std::vector<std::size_t> ycols;
  ycols.reserve(outcome_cols.size());
  for (const auto& name : outcome_cols) ycols.push_back(col_index(name));
  const std::size_t gcol = col_index(group_col);

  std::map<std::string, std::vector<double>> flat;  // row-major per group
  std::map<std::string, Eigen::Index> counts;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(cells.size()),
                       lineno);
    const std::string& label = cells[gcol];
    auto& dst = flat[label];
    for (std::size_t c : ycols) {
      double v;
      if (!detail::parse_double(cells[c], v) || !std::isfinite(v))
        throw ParseError("cell '" + cells[c] + "' in column '" + header[c] +
                             "' is not a finite number",
                         lineno);
      dst.push_back(v);
    }
    counts[label] += 1;
  }

  const Eigen::Index k = static_cast<Eigen::Index>(outcome_cols.size());
  std::map<std::string, Eigen::MatrixXd> groups;
  for (auto& [label, values] : flat) {
    Eigen::Index n = counts[label];
    Eigen::MatrixXd m(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        m(i, j) = values[static_cast<std::size_t>(i * k + j)];
    groups.emplace(label, std::move(m));
  }
  if (groups.size() < 2)
    throw ValidationError("'" + path + "' holds " + std::to_string(groups.size()) +
                          " group(s); need at least two");
  return GroupedDataset::from_groups(std::move(groups));
}

// Writes the dataset back to CSV with the given column names. Values are
// printed with 17 significant digits so a reload is bit-exact. Groups come
// out in label order, rows in stored order.
inline void save_csv(const std::string& path, const GroupedDataset& ds,
                     const std::vector<std::string>& outcome_cols,
                     const std::string& group_col) {
  if (static_cast<Eigen::Index>(outcome_cols.size()) != ds.k())
    throw DimensionError("need " + std::to_string(ds.k()) +
                         " outcome column names, got " +
                         std::to_string(outcome_cols.size()));
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const auto& name : outcome_cols) out << name << ',';
  out << group_col << '\n';
  for (const auto& [label, mat] : ds.groups()) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j)
        out << detail::format_double(mat(i, j)) << ',';
      out << label << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fairpost
