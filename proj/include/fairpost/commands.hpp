#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fairpost/barycenter.hpp"
#include "fairpost/certify.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/disparity.hpp"
#include "fairpost/ols.hpp"
#include "fairpost/pareto.hpp"
#include "fairpost/serialize.hpp"
#include "fairpost/svg.hpp"
#include "fairpost/synthetic.hpp"

namespace fairpost {

// Everything a subcommand needs, filled by the flag parser (or directly by
// tests). Unused fields stay at their defaults.
struct RunConfig {
  std::string input;
  std::string output;
  std::string output_dir;
  std::string model_path;
  std::string svg_path;
  std::string spec_path;

  std::vector<std::string> outcome_cols = {"y"};
  std::string group_col = "group";
  std::vector<std::string> feature_cols;  // experiment; empty = all remaining

  std::string variant = "auto";  // quantile | affine | auto (by dimension)
  std::string method = "auto";   // disparity: quantile | bures | exact | auto

  bool d_grid_set = false;
  double d_grid_min = 0.0;
  double d_grid_max = 0.0;
  int d_grid_count = 0;

  std::vector<double> epsilons;
  std::vector<double> deltas;
  std::optional<double> lipschitz_k;
  std::optional<double> delta_g;
  std::optional<double> epsilon_g;
  std::string mode = "post";  // composition direction

  std::optional<double> d;      // transform tolerance
  std::optional<double> y_sup;  // displacement bound override
  bool use_l_bound = false;

  std::uint64_t seed = 0;

  // 1-D synth shortcut; richer specs go through --spec JSON
  std::vector<std::string> synth_labels;
  std::vector<double> synth_means;
  std::vector<double> synth_sigmas;
  std::vector<long> synth_counts;
};

namespace cli {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void parse_d_grid(const std::string& text, RunConfig& cfg) {
  std::stringstream ss(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  double mn, mx;
  if (parts.size() != 3 || !detail::parse_double(parts[0], mn) ||
      !detail::parse_double(parts[1], mx))
    throw ValidationError("--d-grid expects min:max:count, got '" + text + "'");
  long count;
  try {
    count = std::stol(parts[2]);
  } catch (...) {
    throw ValidationError("--d-grid count '" + parts[2] + "' is not an integer");
  }
  cfg.d_grid_min = mn;
  cfg.d_grid_max = mx;
  cfg.d_grid_count = static_cast<int>(count);
  cfg.d_grid_set = true;
}

inline std::vector<double> expand_d_grid(double mn, double mx, int count) {
  if (count < 1) throw ValidationError("tolerance grid needs count >= 1");
  if (!(mn >= 0.0)) throw ValidationError("tolerance grid starts below 0");
  if (!(mx >= mn)) throw ValidationError("tolerance grid is not ascending");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.push_back(mn);
    return grid;
  }
  for (int i = 0; i < count; ++i)
    grid.push_back(mn + (mx - mn) * static_cast<double>(i) /
                            static_cast<double>(count - 1));
  return grid;
}

inline BarycenterModel::Variant resolve_variant(const RunConfig& cfg,
                                                Eigen::Index k) {
  if (cfg.variant == "quantile") return BarycenterModel::Variant::quantile;
  if (cfg.variant == "affine") return BarycenterModel::Variant::affine;
  if (cfg.variant == "auto")
    return k == 1 ? BarycenterModel::Variant::quantile
                  : BarycenterModel::Variant::affine;
  throw ValidationError("unknown variant '" + cfg.variant +
                        "' (expected quantile or affine)");
}

inline DisparityMethod resolve_method(const RunConfig& cfg, Eigen::Index k) {
  if (cfg.method == "quantile") return DisparityMethod::quantile1d;
  if (cfg.method == "bures") return DisparityMethod::bures;
  if (cfg.method == "exact") return DisparityMethod::exact_assignment;
  if (cfg.method == "auto")
    return k == 1 ? DisparityMethod::quantile1d : DisparityMethod::bures;
  throw ValidationError("unknown disparity method '" + cfg.method + "'");
}

inline DisparityMethod method_for_variant(BarycenterModel::Variant v) {
  return v == BarycenterModel::Variant::quantile ? DisparityMethod::quantile1d
                                                 : DisparityMethod::bures;
}

inline BarycenterModel fit_variant(const GroupedDataset& ds,
                                   BarycenterModel::Variant variant) {
  return variant == BarycenterModel::Variant::quantile
             ? fit_quantile_barycenter(ds)
             : fit_affine_barycenter(ds);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// L the certificates run on: empirical sup by default, the analytic bound on
// request (affine models only).
inline double select_l(const RunConfig& cfg, const DisplacementStats& stats) {
  if (!cfg.use_l_bound) return stats.l_emp;
  if (!stats.l_bound)
    throw ValidationError(
        "--use-l-bound needs an affine model (no analytic bound for "
        "quantile maps)");
  return *stats.l_bound;
}

// ---------------------------------------------------------------------------

inline void cmd_fit(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "fit needs --input");
  require(!cfg.output.empty(), "fit needs --output for the model JSON");
  require(!cfg.outcome_cols.empty(), "fit needs at least one outcome column");
  GroupedDataset ds = load_csv(cfg.input, cfg.outcome_cols, cfg.group_col);
  BarycenterModel model = fit_variant(ds, resolve_variant(cfg, ds.k()));
  save_model(cfg.output, model);
  DisplacementStats stats = displacement_sup(model, ds, cfg.y_sup);
  out << "fitted "
      << (model.variant == BarycenterModel::Variant::quantile ? "quantile"
                                                              : "affine")
      << " model on " << ds.total_n() << " samples in " << ds.groups().size()
      << " groups\n";
  out << "V = " << detail::format_double(model.projection_loss) << "\n";
  out << "L_emp = " << detail::format_double(stats.l_emp) << "\n";
  if (stats.l_bound)
    out << "L_bound = " << detail::format_double(*stats.l_bound) << " (y_sup "
        << fmt(*stats.y_sup) << ")\n";
  out << "model written to " << cfg.output << "\n";
}

inline void cmd_disparity(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "disparity needs --input");
  GroupedDataset ds = load_csv(cfg.input, cfg.outcome_cols, cfg.group_col);
  DisparityReport report =
      wasserstein_disparity(ds, resolve_method(cfg, ds.k()));
  if (!cfg.output.empty()) save_json(cfg.output, disparity_to_json(report));
  out << "method = " << to_string(report.method) << "\n";
  out << "D = " << detail::format_double(report.disparity) << "\n";
  for (const auto& [pair, w] : report.pairwise)
    if (pair.first < pair.second)
      out << "W2(" << pair.first << ", " << pair.second
          << ") = " << detail::format_double(w) << "\n";
}

inline void cmd_transform(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "transform needs --input");
  require(!cfg.output.empty(), "transform needs --output");
  require(!cfg.model_path.empty(), "transform needs --model");
  require(cfg.d.has_value(), "transform needs --d (disparity tolerance)");
  GroupedDataset ds = load_csv(cfg.input, cfg.outcome_cols, cfg.group_col);
  BarycenterModel model = load_model(cfg.model_path);
  GroupedDataset moved = transform(ds, model, *cfg.d);
  save_csv(cfg.output, moved, cfg.outcome_cols, cfg.group_col);
  const double t = t_for_tolerance(model.projection_loss, *cfg.d);
  out << "t = " << detail::format_double(t) << "\n";
  out << "transformed data written to " << cfg.output << "\n";
}

inline void cmd_frontier(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "frontier needs --input");
  require(!cfg.output.empty(), "frontier needs --output for the CSV");
  GroupedDataset ds = load_csv(cfg.input, cfg.outcome_cols, cfg.group_col);
  BarycenterModel model = cfg.model_path.empty()
                              ? fit_variant(ds, resolve_variant(cfg, ds.k()))
                              : load_model(cfg.model_path);

  std::vector<double> grid;
  if (cfg.d_grid_set) {
    grid = expand_d_grid(cfg.d_grid_min, cfg.d_grid_max, cfg.d_grid_count);
  } else {
    // default sweep: identity end sits at sqrt(2) V
    grid = expand_d_grid(0.0, std::sqrt(2.0) * model.projection_loss, 21);
  }

  std::vector<ParetoPoint> points = frontier(ds, model, grid);
  save_frontier_csv(cfg.output, points);
  out << "frontier with " << points.size() << " points written to "
      << cfg.output << "\n";

  std::optional<double> shade;
  if (!cfg.epsilons.empty() || !cfg.deltas.empty()) {
    require(!cfg.epsilons.empty() && !cfg.deltas.empty(),
            "a budget needs both --epsilon and --delta");
    IFBudget budget = IFBudget::eps_delta(cfg.epsilons.front(),
                                          cfg.deltas.front());
    DisplacementStats stats = displacement_sup(model, ds, cfg.y_sup);
    Certificate cert =
        certify_frontier(budget, select_l(cfg, stats),
                         model.projection_loss);
    shade = cert.d_min;
    out << "certified d_min = "
        << (std::isinf(cert.d_min) ? std::string("inf")
                                   : detail::format_double(cert.d_min))
        << " (" << to_string(cert.verdict) << ")\n";
  }
  if (!cfg.svg_path.empty()) {
    write_frontier_svg(cfg.svg_path, points, shade);
    out << "plot written to " << cfg.svg_path << "\n";
  }
}

inline void cmd_certify(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "certify needs --input");
  require(!cfg.model_path.empty(), "certify needs --model");
  GroupedDataset ds = load_csv(cfg.input, cfg.outcome_cols, cfg.group_col);
  BarycenterModel model = load_model(cfg.model_path);
  DisplacementStats stats = displacement_sup(model, ds, cfg.y_sup);
  const double l = select_l(cfg, stats);
  const double v = model.projection_loss;

  std::vector<Certificate> certs;
  certs.push_back(certify_lipschitz_barycenter(ds, model));

  require(cfg.epsilons.size() == cfg.deltas.size(),
          "--epsilon and --delta counts differ");
  const CompositionMode mode =
      cfg.mode == "pre" ? CompositionMode::pre : CompositionMode::post;
  require(cfg.mode == "pre" || cfg.mode == "post",
          "--mode must be post or pre");
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    IFBudget budget = IFBudget::eps_delta(cfg.epsilons[i], cfg.deltas[i]);
    certs.push_back(certify_optimal(budget, l));
    certs.push_back(certify_frontier(budget, l, v));
    if (cfg.delta_g)
      certs.push_back(certify_composition_ed(budget, *cfg.delta_g, l, v,
                                             CompositionMode::post));
    if (cfg.epsilon_g)
      certs.push_back(certify_composition_ed(budget, *cfg.epsilon_g, l, v,
                                             CompositionMode::pre));
    if (cfg.lipschitz_k)
      certs.push_back(
          certify_composition_lip(budget, *cfg.lipschitz_k, l, v, mode));
  }

  json j;
  j["displacement"] = stats_to_json(stats);
  j["l_used"] = l;
  j["v"] = v;
  j["certificates"] = json::array();
  for (const auto& c : certs) j["certificates"].push_back(certificate_to_json(c));
  if (!cfg.output.empty()) save_json(cfg.output, j);

  out << "L_emp = " << detail::format_double(stats.l_emp);
  if (stats.l_bound)
    out << ", L_bound = " << detail::format_double(*stats.l_bound);
  out << ", V = " << detail::format_double(v) << "\n";
  for (const auto& c : certs) {
    out << c.rule << ": " << to_string(c.verdict) << ", d_min = "
        << (std::isinf(c.d_min) ? std::string("inf")
                                : detail::format_double(c.d_min))
        << "\n";
  }
}

inline SyntheticSpec synth_spec_from_json(const json& j) {
  SyntheticSpec spec;
  try {
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& g : j.at("groups")) {
      GroupSpec gs;
      gs.label = g.at("label").get<std::string>();
      gs.count = g.at("n").get<Eigen::Index>();
      const json& mean = g.at("mean");
      if (mean.is_number()) {
        gs.mean = Eigen::VectorXd::Constant(1, mean.get<double>());
      } else {
        gs.mean = detail::vec_from_json(mean);
      }
      const json& cov = g.at("cov");
      if (cov.is_number()) {
        gs.cov = Eigen::MatrixXd::Constant(1, 1, cov.get<double>());
      } else {
        gs.cov = detail::mat_from_json(cov);
      }
      spec.groups.push_back(std::move(gs));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed synthetic spec: ") + e.what());
  }
  return spec;
}

inline void cmd_synth(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.output.empty(), "synth needs --output");
  SyntheticSpec spec;
  if (!cfg.spec_path.empty()) {
    spec = synth_spec_from_json(load_json(cfg.spec_path));
    spec.seed = cfg.seed ? cfg.seed : spec.seed;
  } else {
    const std::size_t g = cfg.synth_labels.size();
    require(g >= 2, "synth needs --spec or at least two --label entries");
    require(cfg.synth_means.size() == g && cfg.synth_sigmas.size() == g &&
                cfg.synth_counts.size() == g,
            "--label/--mean/--sigma/--n counts differ");
    spec.seed = cfg.seed;
    for (std::size_t i = 0; i < g; ++i) {
      GroupSpec gs;
      gs.label = cfg.synth_labels[i];
      gs.mean = Eigen::VectorXd::Constant(1, cfg.synth_means[i]);
      gs.cov = Eigen::MatrixXd::Constant(
          1, 1, cfg.synth_sigmas[i] * cfg.synth_sigmas[i]);
      gs.count = cfg.synth_counts[i];
      spec.groups.push_back(std::move(gs));
    }
  }
  GroupedDataset ds = synth_gaussian(spec);
  std::vector<std::string> cols;
  if (static_cast<Eigen::Index>(cfg.outcome_cols.size()) == ds.k()) {
    cols = cfg.outcome_cols;
  } else if (ds.k() == 1) {
    cols = {"y"};
  } else {
    for (Eigen::Index i = 0; i < ds.k(); ++i)
      cols.push_back("y" + std::to_string(i + 1));
  }
  save_csv(cfg.output, ds, cols, cfg.group_col);
  out << ds.total_n() << " samples in " << ds.groups().size()
      << " groups written to " << cfg.output << "\n";
}

// ---------------------------------------------------------------------------
// experiment: OLS baselines -> barycenter on predictions -> frontier +
// certificates, one directory of artifacts

namespace detail_cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
  t.header = fairpost::detail::split_csv_line(line);
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (fairpost::detail::trim(line).empty()) continue;
    auto cells = fairpost::detail::split_csv_line(line);
    if (cells.size() != t.header.size())
      throw ParseError("expected " + std::to_string(t.header.size()) +
                           " fields, got " + std::to_string(cells.size()),
                       lineno);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace detail_cli

inline void cmd_experiment(const RunConfig& cfg, std::ostream& out = std::cout) {
  require(!cfg.input.empty(), "experiment needs --input");
  require(!cfg.output_dir.empty(), "experiment needs --output-dir");
  require(!cfg.outcome_cols.empty(), "experiment needs outcome columns");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec)
    throw IoError("cannot create directory '" + cfg.output_dir + "': " +
                  ec.message());
  auto in_dir = [&](const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  detail_cli::Table table = detail_cli::read_table(cfg.input);
  auto col_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw SchemaError("column '" + name + "' not found in '" + cfg.input +
                        "'");
    return static_cast<std::size_t>(it - table.header.begin());
  };

  const std::size_t gcol = col_index(cfg.group_col);
  std::vector<std::size_t> ycols;
  for (const auto& name : cfg.outcome_cols) ycols.push_back(col_index(name));

  std::vector<std::size_t> xcols;
  std::vector<std::string> xnames;
  if (!cfg.feature_cols.empty()) {
    for (const auto& name : cfg.feature_cols) {
      xcols.push_back(col_index(name));
      xnames.push_back(name);
    }
  } else {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == gcol) continue;
      if (std::find(ycols.begin(), ycols.end(), c) != ycols.end()) continue;
      xcols.push_back(c);
      xnames.push_back(table.header[c]);
    }
  }
  require(!xcols.empty(), "experiment needs at least one feature column");

  const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(xcols.size());
  const Eigen::Index k = static_cast<Eigen::Index>(ycols.size());
  require(n > 0, "'" + cfg.input + "' has no data rows");

  Eigen::MatrixXd x(n, p), y(n, k);
  std::vector<std::string> z(static_cast<std::size_t>(n));
  long lineno = 1;  // header line
  for (Eigen::Index i = 0; i < n; ++i) {
    ++lineno;
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    auto cell = [&](std::size_t c, double& slot) {
      if (!fairpost::detail::parse_double(row[c], slot) ||
          !std::isfinite(slot))
        throw ParseError("cell '" + row[c] + "' in column '" +
                             table.header[c] + "' is not a finite number",
                         lineno);
    };
    for (Eigen::Index j = 0; j < p; ++j)
      cell(xcols[static_cast<std::size_t>(j)], x(i, j));
    for (Eigen::Index j = 0; j < k; ++j)
      cell(ycols[static_cast<std::size_t>(j)], y(i, j));
    z[static_cast<std::size_t>(i)] = row[gcol];
  }

  // one-hot group indicators for the including-Z baseline
  std::vector<std::string> labels(z.begin(), z.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  require(labels.size() >= 2, "experiment needs at least two groups");
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(
      n, static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = std::lower_bound(labels.begin(), labels.end(),
                               z[static_cast<std::size_t>(i)]);
    onehot(i, static_cast<Eigen::Index>(it - labels.begin())) = 1.0;
  }
  Eigen::MatrixXd x_with(n, p + onehot.cols());
  x_with << x, onehot;

  OLSModel ols_excl = fit_ols(x, y);
  OLSModel ols_with = fit_ols(x_with, y);
  Eigen::MatrixXd pred_excl = ols_excl.predict(x);
  Eigen::MatrixXd pred_with = ols_with.predict(x_with);

  auto group_rows = [&](const Eigen::MatrixXd& pred) {
    std::map<std::string, std::vector<Eigen::Index>> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      idx[z[static_cast<std::size_t>(i)]].push_back(i);
    std::map<std::string, Eigen::MatrixXd> groups;
    for (const auto& [label, rows] : idx) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), k);
      for (std::size_t r = 0; r < rows.size(); ++r)
        m.row(static_cast<Eigen::Index>(r)) = pred.row(rows[r]);
      groups.emplace(label, std::move(m));
    }
    return GroupedDataset::from_groups(std::move(groups));
  };

  GroupedDataset pred_ds = group_rows(pred_excl);
  GroupedDataset pred_with_ds = group_rows(pred_with);

  const BarycenterModel::Variant variant = resolve_variant(cfg, k);
  const DisparityMethod method = method_for_variant(variant);
  BarycenterModel model = fit_variant(pred_ds, variant);
  save_model(in_dir("model.json"), model);

  const double rmse_excl =
      std::sqrt((pred_excl - y).squaredNorm() / static_cast<double>(n));
  const double rmse_with =
      std::sqrt((pred_with - y).squaredNorm() / static_cast<double>(n));
  const double d_excl = wasserstein_disparity(pred_ds, method).disparity;
  const double d_with = wasserstein_disparity(pred_with_ds, method).disparity;

  std::vector<double> grid;
  if (cfg.d_grid_set) {
    grid = expand_d_grid(cfg.d_grid_min, cfg.d_grid_max, cfg.d_grid_count);
  } else if (d_excl > 0.0) {
    grid = expand_d_grid(0.0, d_excl, 21);
  } else {
    grid = {0.0};
  }
  std::vector<ParetoPoint> points = frontier(pred_ds, model, grid);
  save_frontier_csv(in_dir("frontier.csv"), points);

  DisplacementStats stats = displacement_sup(model, pred_ds, cfg.y_sup);
  const double l = select_l(cfg, stats);
  const double v = model.projection_loss;
  const double trained_k = ols_excl.lipschitz_constant();
  save_json(in_dir("displacement.json"), stats_to_json(stats));

  require(cfg.epsilons.size() == cfg.deltas.size(),
          "--epsilon and --delta counts differ");
  json certs = json::array();
  std::optional<double> shade;
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    IFBudget budget = IFBudget::eps_delta(cfg.epsilons[i], cfg.deltas[i]);
    Certificate fc = certify_frontier(budget, l, v);
    certs.push_back(certificate_to_json(fc));
    if (!shade) shade = fc.d_min;
    // composition against the trained predictor's own Lipschitz constant;
    // a budget the predictor already breaks is recorded, not fatal
    try {
      certs.push_back(certificate_to_json(certify_composition_lip(
          budget, trained_k, l, v, CompositionMode::post)));
    } catch (const ValidationError& e) {
      json skip;
      skip["rule"] = "composition-lipschitz";
      skip["error"] = e.what();
      skip["inputs"] = {{"epsilon", budget.epsilon},
                        {"delta", budget.delta},
                        {"k", trained_k}};
      certs.push_back(skip);
    }
  }
  save_json(in_dir("certificates.json"), certs);
  write_frontier_svg(in_dir("frontier.svg"), points, shade);

  std::ostringstream summary;
  summary << "rows = " << n << ", features = " << p << ", outcomes = " << k
          << ", groups = " << labels.size() << "\n";
  summary << "ols excluding group: rmse = " << fmt(rmse_excl)
          << ", prediction disparity = " << fmt(d_excl)
          << ", lipschitz K = " << fmt(trained_k);
  if (ols_excl.rank_deficient)
    summary << " (rank deficient; minimum-norm solution)";
  summary << "\n";
  summary << "ols including group: rmse = " << fmt(rmse_with)
          << ", prediction disparity = " << fmt(d_with);
  if (ols_with.rank_deficient)
    summary << " (rank deficient; minimum-norm solution)";
  summary << "\n";
  summary << "barycenter ("
          << (variant == BarycenterModel::Variant::quantile ? "quantile"
                                                            : "affine")
          << "): V = " << detail::format_double(v)
          << ", L_emp = " << detail::format_double(stats.l_emp);
  if (stats.l_bound)
    summary << ", L_bound = " << detail::format_double(*stats.l_bound);
  summary << "\n";
  summary << "frontier: " << points.size() << " points over d in ["
          << fmt(grid.front()) << ", " << fmt(grid.back()) << "]\n";
  if (shade)
    summary << "first budget d_min = "
            << (std::isinf(*shade) ? std::string("inf")
                                   : detail::format_double(*shade))
            << "\n";
  summary << "artifacts: model.json, frontier.csv, frontier.svg, "
             "displacement.json, certificates.json\n";

  std::ofstream sf(in_dir("summary.txt"));
  if (!sf) throw IoError("cannot open summary.txt for writing");
  sf << summary.str();
  out << summary.str();
}

}  // namespace cli
}  // namespace fairpost
