#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairpost/barycenter.hpp"
#include "fairpost/certify.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/disparity.hpp"
#include "fairpost/pareto.hpp"

namespace fairpost {

using json = nlohmann::json;

namespace detail {

inline json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Eigen::VectorXd vec_from_json(const json& a) {
  if (!a.is_array()) throw ValidationError("expected a JSON array");
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ValidationError("expected numeric array");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

inline json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    rows.push_back(vec_to_json(m.row(i).transpose()));
  return rows;
}

inline Eigen::MatrixXd mat_from_json(const json& a) {
  if (!a.is_array() || a.empty())
    throw ValidationError("expected a non-empty JSON array of rows");
  Eigen::VectorXd first = vec_from_json(a[0]);
  Eigen::MatrixXd m(a.size(), first.size());
  m.row(0) = first.transpose();
  for (std::size_t i = 1; i < a.size(); ++i) {
    Eigen::VectorXd row = vec_from_json(a[i]);
    if (row.size() != m.cols())
      throw ValidationError("ragged JSON matrix");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

}  // namespace detail

inline json model_to_json(const BarycenterModel& model) {
  json j;
  j["variant"] =
      model.variant == BarycenterModel::Variant::quantile ? "quantile"
                                                          : "affine";
  j["k"] = model.k;
  j["projection_loss"] = model.projection_loss;
  j["weights"] = json::object();
  for (const auto& [label, w] : model.weights) j["weights"][label] = w;
  j["groups"] = json::object();
  if (model.variant == BarycenterModel::Variant::quantile) {
    for (const auto& [label, knots] : model.quantile_maps) {
      j["groups"][label] = {{"source", detail::vec_to_json(knots.source)},
                            {"target", detail::vec_to_json(knots.target)}};
    }
  } else {
    for (const auto& [label, am] : model.affine_maps) {
      j["groups"][label] = {{"mean", detail::vec_to_json(am.mean)},
                            {"linear", detail::mat_to_json(am.linear)}};
    }
    j["barycenter_mean"] = detail::vec_to_json(model.barycenter_mean);
    j["barycenter_cov"] = detail::mat_to_json(model.barycenter_cov);
  }
  return j;
}

inline BarycenterModel model_from_json(const json& j) {
  BarycenterModel model;
  try {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "quantile")
      model.variant = BarycenterModel::Variant::quantile;
    else if (variant == "affine")
      model.variant = BarycenterModel::Variant::affine;
    else
      throw ValidationError("unknown variant '" + variant + "'");
    model.k = j.at("k").get<Eigen::Index>();
    model.projection_loss = j.at("projection_loss").get<double>();
    for (const auto& [label, w] : j.at("weights").items())
      model.weights[label] = w.get<double>();
    for (const auto& [label, g] : j.at("groups").items()) {
      if (model.variant == BarycenterModel::Variant::quantile) {
        model.quantile_maps.emplace(
            label, QuantileKnots::make(detail::vec_from_json(g.at("source")),
                                       detail::vec_from_json(g.at("target"))));
      } else {
        AffineMapZ am;
        am.mean = detail::vec_from_json(g.at("mean"));
        am.linear = detail::mat_from_json(g.at("linear"));
        model.affine_maps.emplace(label, std::move(am));
      }
    }
    if (model.variant == BarycenterModel::Variant::affine) {
      model.barycenter_mean = detail::vec_from_json(j.at("barycenter_mean"));
      model.barycenter_cov = detail::mat_from_json(j.at("barycenter_cov"));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  if (model.weights.size() < 2)
    throw ValidationError("model JSON has fewer than two groups");
  return model;
}

inline json disparity_to_json(const DisparityReport& report) {
  json j;
  j["method"] = to_string(report.method);
  j["disparity"] = report.disparity;
  j["pairwise"] = json::array();
  for (const auto& [pair, w] : report.pairwise)
    j["pairwise"].push_back(
        {{"from", pair.first}, {"to", pair.second}, {"w2", w}});
  return j;
}

inline json stats_to_json(const DisplacementStats& stats) {
  json j;
  j["l_emp"] = stats.l_emp;
  j["l_bound"] = stats.l_bound ? json(*stats.l_bound) : json(nullptr);
  j["y_sup"] = stats.y_sup ? json(*stats.y_sup) : json(nullptr);
  return j;
}

// d_min = +inf serializes as the string "inf" (JSON numbers cannot carry it).
inline json certificate_to_json(const Certificate& cert) {
  json j;
  j["rule"] = cert.rule;
  j["verdict"] = to_string(cert.verdict);
  if (std::isinf(cert.d_min))
    j["d_min"] = "inf";
  else
    j["d_min"] = cert.d_min;
  j["inputs"] = json::object();
  for (const auto& [key, value] : cert.inputs) j["inputs"][key] = value;
  j["notes"] = cert.notes;
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void save_model(const std::string& path, const BarycenterModel& model) {
  save_json(path, model_to_json(model));
}

inline BarycenterModel load_model(const std::string& path) {
  return model_from_json(load_json(path));
}

// Frontier sweeps travel as CSV with a fixed header. Values carry 17
// significant digits so reload is bit-exact.
inline void save_frontier_csv(const std::string& path,
                              const std::vector<ParetoPoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "d,t,l2_loss,measured_disparity\n";
  for (const auto& p : points)
    out << detail::format_double(p.d) << ',' << detail::format_double(p.t)
        << ',' << detail::format_double(p.l2_loss) << ','
        << detail::format_double(p.measured_disparity) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<ParetoPoint> load_frontier_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) ||
      detail::trim(line) != "d,t,l2_loss,measured_disparity")
    throw SchemaError("'" + path + "' is not a frontier CSV");
  std::vector<ParetoPoint> points;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(cells.size()),
                       lineno);
    ParetoPoint p;
    double* slots[4] = {&p.d, &p.t, &p.l2_loss, &p.measured_disparity};
    for (int c = 0; c < 4; ++c)
      if (!detail::parse_double(cells[static_cast<std::size_t>(c)], *slots[c]))
        throw ParseError("cell '" + cells[static_cast<std::size_t>(c)] +
                             "' is not a number",
                         lineno);
    points.push_back(p);
  }
  return points;
}

}  // namespace fairpost
