#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fairpost/barycenter.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/disparity.hpp"
#include "fairpost/linalg.hpp"

namespace fairpost {

// An individual-fairness requirement: either "inputs within epsilon keep
// outputs within delta" or "outputs move at most K times the input distance".
struct IFBudget {
  enum class Kind { epsilon_delta, lipschitz };

  Kind kind = Kind::epsilon_delta;
  double epsilon = 0.0;
  double delta = 0.0;
  double k = 0.0;

  // epsilon = 0 is allowed: it asks that identical inputs stay within delta,
  // which is exactly the regime the sharpness constructions probe.
  static IFBudget eps_delta(double epsilon, double delta) {
    if (!(epsilon >= 0.0))
      throw ValidationError("epsilon must be >= 0");
    if (!(delta > 0.0)) throw ValidationError("delta must be > 0");
    IFBudget b;
    b.kind = Kind::epsilon_delta;
    b.epsilon = epsilon;
    b.delta = delta;
    return b;
  }

  static IFBudget lipschitz(double k) {
    if (!(k > 0.0)) throw ValidationError("lipschitz constant must be > 0");
    IFBudget b;
    b.kind = Kind::lipschitz;
    b.k = k;
    return b;
  }
};

// Sup displacement of the full projection: the empirical max over samples,
// plus for affine models the analytic bound
//   sup_z |m_z - mbar| + sup_z |A_z - I|_op * y_sup
// with y_sup defaulting to the largest sample norm.
struct DisplacementStats {
  double l_emp = 0.0;
  std::optional<double> l_bound;
  std::optional<double> y_sup;
};

inline DisplacementStats displacement_sup(
    const BarycenterModel& model, const GroupedDataset& ds,
    std::optional<double> y_sup = std::nullopt) {
  if (y_sup && !(*y_sup >= 0.0))
    throw ValidationError("y_sup must be >= 0");
  DisplacementStats stats;
  double max_norm = 0.0;
  for (const auto& [label, mat] : ds.groups()) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      Eigen::VectorXd y = mat.row(i).transpose();
      stats.l_emp =
          std::max(stats.l_emp, (apply_map(model, y, label) - y).norm());
      max_norm = std::max(max_norm, y.norm());
    }
  }
  if (model.variant == BarycenterModel::Variant::affine) {
    const double ys = y_sup ? *y_sup : max_norm;
    double mean_term = 0.0, linear_term = 0.0;
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(model.k, model.k);
    for (const auto& [label, am] : model.affine_maps) {
      mean_term = std::max(mean_term, (am.mean - model.barycenter_mean).norm());
      linear_term = std::max(linear_term, operator_norm(am.linear - eye));
    }
    stats.y_sup = ys;
    stats.l_bound = mean_term + linear_term * ys;
  }
  return stats;
}

enum class Verdict { compatible, incompatible, conditional };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::compatible: return "compatible";
    case Verdict::incompatible: return "incompatible";
    case Verdict::conditional: return "conditional";
  }
  return "?";
}

// Outcome of one certification rule: the smallest certified disparity
// tolerance d_min (0 = everything certified, +inf = nothing certified), the
// rule that produced it, and the inputs it was evaluated on.
struct Certificate {
  Verdict verdict = Verdict::conditional;
  double d_min = std::numeric_limits<double>::infinity();
  std::string rule;
  std::map<std::string, double> inputs;
  std::string notes;
};

namespace detail {

inline double sqrt2v(double v) { return std::sqrt(2.0) * v; }

// d_min = sqrt(2) V (1 - clamp(num / (2 L))), the common shape of the
// sufficient conditions. num < 0 means the budget is unsatisfiable even at
// the identity end, reported as +inf by the callers before reaching here.
inline double dmin_from_ratio(double num, double l, double v) {
  double ratio;
  if (l > 0.0)
    ratio = num / (2.0 * l);
  else
    ratio = std::numeric_limits<double>::infinity();  // zero-loss map
  if (ratio > 1.0) ratio = 1.0;
  double d = sqrt2v(v) * (1.0 - ratio);
  if (d < 0.0) d = 0.0;
  if (d > sqrt2v(v)) d = sqrt2v(v);
  return d;
}

}  // namespace detail

// No-Lipschitz-certificate rule: when the measured disparity is positive the
// group transport maps differ at a shared input, so no finite K works for any
// tolerance below sqrt(2) V; only the identity end d >= sqrt(2) V remains.
inline Certificate certify_lipschitz_barycenter(const GroupedDataset& ds,
                                                const BarycenterModel& model) {
  const DisparityMethod method =
      model.variant == BarycenterModel::Variant::quantile
          ? DisparityMethod::quantile1d
          : DisparityMethod::bures;
  const double d_obs = wasserstein_disparity(ds, method).disparity;
  Certificate cert;
  cert.rule = "barycenter-lipschitz";
  cert.inputs = {{"d_observed", d_obs}, {"v", model.projection_loss}};
  if (d_obs > 1e-10) {
    cert.verdict = Verdict::incompatible;
    cert.d_min = detail::sqrt2v(model.projection_loss);
    cert.notes =
        "group maps disagree at shared inputs, so no finite Lipschitz "
        "constant holds for any tolerance below sqrt(2) V; only the identity "
        "end is compatible";
  } else {
    cert.verdict = Verdict::compatible;
    cert.d_min = 0.0;
    cert.notes = "groups already coincide; the projection is the identity";
  }
  return cert;
}

// Full-projection rule: the barycenter map keeps every epsilon-close pair
// within delta exactly when its sup displacement L satisfies
// L <= (delta - epsilon) / 2. Above that threshold nothing is concluded here
// (the threshold is sharp without further distributional assumptions); the
// frontier rule takes over.
inline Certificate certify_optimal(const IFBudget& budget, double l) {
  if (budget.kind != IFBudget::Kind::epsilon_delta)
    throw ValidationError("certify_optimal needs an (epsilon, delta) budget");
  if (!(l >= 0.0)) throw ValidationError("displacement must be >= 0");
  Certificate cert;
  cert.rule = "optimal-epsilon-delta";
  cert.inputs = {{"epsilon", budget.epsilon},
                 {"delta", budget.delta},
                 {"l", l}};
  if (l <= 0.5 * (budget.delta - budget.epsilon)) {
    cert.verdict = Verdict::compatible;
    cert.d_min = 0.0;
    cert.notes = "sup displacement within (delta - epsilon) / 2; the bound is "
                 "tight, so no slack remains for worst-case inputs";
  } else {
    cert.verdict = Verdict::conditional;
    cert.d_min = std::numeric_limits<double>::infinity();
    cert.notes = "sup displacement exceeds (delta - epsilon) / 2 and the "
                 "threshold is sharp; use the frontier rule for a partial "
                 "certificate";
  }
  return cert;
}

// Frontier rule: the tolerance-d map moves points at most
// (1 - d / (sqrt(2) V)) L, so the budget holds once
// d >= sqrt(2) V (1 - (delta - epsilon) / (2 L)). delta < epsilon certifies
// nothing (even the identity fails such a budget).
inline Certificate certify_frontier(const IFBudget& budget, double l, double v) {
  if (budget.kind != IFBudget::Kind::epsilon_delta)
    throw ValidationError("certify_frontier needs an (epsilon, delta) budget");
  if (!(l >= 0.0)) throw ValidationError("displacement must be >= 0");
  if (!(v >= 0.0)) throw ValidationError("projection loss must be >= 0");
  Certificate cert;
  cert.rule = "frontier-epsilon-delta";
  cert.inputs = {{"epsilon", budget.epsilon},
                 {"delta", budget.delta},
                 {"l", l},
                 {"v", v}};
  const double gap = budget.delta - budget.epsilon;
  if (gap < 0.0) {
    cert.verdict = Verdict::incompatible;
    cert.d_min = std::numeric_limits<double>::infinity();
    cert.notes = "delta < epsilon: even the identity map breaks this budget";
    return cert;
  }
  cert.verdict = Verdict::compatible;
  if (gap >= 2.0 * l) {
    cert.d_min = 0.0;
    cert.notes = "budget slack covers the full projection; every tolerance "
                 "is certified";
  } else {
    cert.d_min = detail::sqrt2v(v) * (1.0 - gap / (2.0 * l));
    if (cert.d_min < 0.0) cert.d_min = 0.0;
    cert.notes = "tolerances d >= d_min keep residual displacement within "
                 "the budget slack";
  }
  return cert;
}

enum class CompositionMode { post, pre };

inline std::string to_string(CompositionMode m) {
  return m == CompositionMode::post ? "post" : "pre";
}

// Composition with a trained model that is itself (eps_g, delta_g)-fair:
// post mode certifies f_d applied after a (epsilon, delta_g)-fair model,
// pre mode certifies a (epsilon_g, delta)-style model consuming f_d output.
// model_param is delta_g (post) or epsilon_g (pre).
inline Certificate certify_composition_ed(const IFBudget& budget,
                                          double model_param, double l,
                                          double v, CompositionMode mode) {
  if (budget.kind != IFBudget::Kind::epsilon_delta)
    throw ValidationError("composition rule needs an (epsilon, delta) budget");
  if (!(l >= 0.0)) throw ValidationError("displacement must be >= 0");
  if (!(v >= 0.0)) throw ValidationError("projection loss must be >= 0");
  Certificate cert;
  cert.rule = "composition-epsilon-delta";
  cert.inputs = {{"epsilon", budget.epsilon},
                 {"delta", budget.delta},
                 {"l", l},
                 {"v", v}};
  double num;
  if (mode == CompositionMode::post) {
    cert.inputs["delta_g"] = model_param;
    if (!(model_param < budget.delta))
      throw ValidationError(
          "composition (post) requires the trained model's delta_g to be "
          "strictly below the target delta");
    num = budget.delta - model_param;
  } else {
    cert.inputs["epsilon_g"] = model_param;
    if (!(model_param > budget.epsilon))
      throw ValidationError(
          "composition (pre) requires the trained model's epsilon_g to be "
          "strictly above the target epsilon");
    num = model_param - budget.epsilon;
  }
  cert.verdict = Verdict::compatible;
  cert.d_min = detail::dmin_from_ratio(num, l, v);
  cert.notes = "post-processing consumes the budget slack left by the "
               "trained model";
  return cert;
}

// Composition with a K-Lipschitz trained model. Post mode requires
// K <= delta / epsilon; pre mode certifies nothing when delta / K < epsilon.
inline Certificate certify_composition_lip(const IFBudget& budget, double k,
                                           double l, double v,
                                           CompositionMode mode) {
  if (budget.kind != IFBudget::Kind::epsilon_delta)
    throw ValidationError("composition rule needs an (epsilon, delta) budget");
  if (!(k > 0.0)) throw ValidationError("lipschitz constant must be > 0");
  if (!(l >= 0.0)) throw ValidationError("displacement must be >= 0");
  if (!(v >= 0.0)) throw ValidationError("projection loss must be >= 0");
  Certificate cert;
  cert.rule = "composition-lipschitz";
  cert.inputs = {{"epsilon", budget.epsilon},
                 {"delta", budget.delta},
                 {"k", k},
                 {"l", l},
                 {"v", v}};
  if (mode == CompositionMode::post) {
    if (budget.epsilon > 0.0 && k > budget.delta / budget.epsilon)
      throw ValidationError(
          "composition (post) requires K <= delta / epsilon; a steeper model "
          "can break the budget on its own");
    cert.verdict = Verdict::compatible;
    cert.d_min =
        detail::dmin_from_ratio(budget.delta - k * budget.epsilon, l, v);
    cert.notes = "the model amplifies input gaps by at most K; the remaining "
                 "slack delta - K epsilon absorbs the post-processing";
  } else {
    const double num = budget.delta / k - budget.epsilon;
    if (num < 0.0) {
      cert.verdict = Verdict::incompatible;
      cert.d_min = std::numeric_limits<double>::infinity();
      cert.notes = "delta / K < epsilon: the model alone exceeds the budget";
      return cert;
    }
    cert.verdict = Verdict::compatible;
    cert.d_min = detail::dmin_from_ratio(num, l, v);
    cert.notes = "pre-processing must leave gaps within delta / K - epsilon "
                 "for the model to stay in budget";
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Empirical probe harness

struct ProbePoint {
  Eigen::VectorXd y;
  std::string label;
};

using ProbePair = std::pair<ProbePoint, ProbePoint>;

struct IFCheckReport {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  double max_output_distance = 0.0;
  double max_ratio = 0.0;       // over pairs with distinct inputs
  bool infinite_ratio = false;  // distinct outputs at zero input distance
  std::optional<ProbePair> witness;  // first offending pair
};

// Runs a map over probe pairs and scores them against a budget.
// (epsilon, delta): a pair violates when inputs are within epsilon but
// outputs land further than delta apart. Lipschitz: a pair violates when the
// output gap exceeds K times the input gap; distinct outputs at identical
// inputs give an infinite ratio.
template <typename MapFn>
IFCheckReport empirical_if_check(MapFn&& f,
                                 const std::vector<ProbePair>& probe_pairs,
                                 const IFBudget& budget) {
  IFCheckReport report;
  for (const auto& pair : probe_pairs) {
    const ProbePoint& p1 = pair.first;
    const ProbePoint& p2 = pair.second;
    const double in_d = (p1.y - p2.y).norm();
    const double out_d = (f(p1.y, p1.label) - f(p2.y, p2.label)).norm();
    ++report.pairs_checked;
    report.max_output_distance = std::max(report.max_output_distance, out_d);
    bool violating = false;
    if (budget.kind == IFBudget::Kind::epsilon_delta) {
      violating = in_d <= budget.epsilon && out_d > budget.delta;
    } else {
      if (in_d > 0.0) {
        report.max_ratio = std::max(report.max_ratio, out_d / in_d);
        violating = out_d > budget.k * in_d;
      } else if (out_d > 0.0) {
        report.infinite_ratio = true;
        violating = true;
      }
    }
    if (violating) {
      ++report.violations;
      if (!report.witness) report.witness = pair;
    }
  }
  return report;
}

// All unordered pairs of dataset samples under their own labels, plus (by
// default) each sample replayed under every other label so shared-input
// disagreements between group maps are visible to the checker.
inline std::vector<ProbePair> sample_probe_pairs(
    const GroupedDataset& ds, bool cross_label_same_point = true) {
  std::vector<ProbePoint> points;
  points.reserve(static_cast<std::size_t>(ds.total_n()));
  for (const auto& [label, mat] : ds.groups())
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      points.push_back({mat.row(i).transpose(), label});

  std::vector<ProbePair> pairs;
  const std::size_t n = points.size();
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pairs.emplace_back(points[i], points[j]);

  if (cross_label_same_point) {
    std::vector<std::string> labels = ds.labels();
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& other : labels)
        if (other != points[i].label)
          pairs.emplace_back(points[i], ProbePoint{points[i].y, other});
  }
  return pairs;
}

// Uniform random probe pairs over the dataset's bounding box, labels drawn
// uniformly from the dataset's labels. Deterministic in the seed.
inline std::vector<ProbePair> random_probe_pairs(const GroupedDataset& ds,
                                                 std::size_t count,
                                                 std::uint64_t seed) {
  const Eigen::Index k = ds.k();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (const auto& [label, mat] : ds.groups()) {
    lo = lo.cwiseMin(mat.colwise().minCoeff().transpose());
    hi = hi.cwiseMax(mat.colwise().maxCoeff().transpose());
  }
  std::vector<std::string> labels = ds.labels();
  std::mt19937_64 engine(seed);
  auto uniform = [&]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  auto draw_point = [&]() {
    ProbePoint p;
    p.y.resize(k);
    for (Eigen::Index j = 0; j < k; ++j)
      p.y(j) = lo(j) + uniform() * (hi(j) - lo(j));
    p.label = labels[static_cast<std::size_t>(engine() % labels.size())];
    return p;
  };
  std::vector<ProbePair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ProbePoint a = draw_point();
    ProbePoint b = draw_point();
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

}  // namespace fairpost
