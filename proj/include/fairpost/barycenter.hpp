#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairpost/dataset.hpp"
#include "fairpost/linalg.hpp"
#include "fairpost/quantile.hpp"

namespace fairpost {

// One group's fitted 1-D transport map, stored as knot pairs: source knots are
// the group's sorted samples, target knots the barycenter quantiles at the
// same ranks. Evaluation interpolates linearly between knots and continues by
// translation (constant displacement) outside the sample range.
//
// Tied source samples can carry distinct targets; for evaluation the ties are
// collapsed to one knot whose target is the mean of the tied targets, which is
// the closest single-valued map in L2. The raw knots are kept for
// serialization and loss bookkeeping.
struct QuantileKnots {
  Eigen::VectorXd source;  // ascending, may contain ties
  Eigen::VectorXd target;

  Eigen::VectorXd eval_source;  // strictly ascending
  Eigen::VectorXd eval_target;

  static QuantileKnots make(Eigen::VectorXd src, Eigen::VectorXd tgt) {
    if (src.size() != tgt.size() || src.size() == 0)
      throw DimensionError("knot vectors must be non-empty and equal length");
    for (Eigen::Index i = 1; i < src.size(); ++i)
      if (src(i) < src(i - 1))
        throw ValidationError("source knots are not ascending");
    QuantileKnots q;
    q.source = std::move(src);
    q.target = std::move(tgt);
    std::vector<double> cs, ct;
    Eigen::Index i = 0;
    while (i < q.source.size()) {
      Eigen::Index j = i;
      double sum = 0.0;
      while (j < q.source.size() && q.source(j) == q.source(i)) {
        sum += q.target(j);
        ++j;
      }
      cs.push_back(q.source(i));
      ct.push_back(sum / static_cast<double>(j - i));
      i = j;
    }
    q.eval_source = Eigen::Map<Eigen::VectorXd>(cs.data(), cs.size());
    q.eval_target = Eigen::Map<Eigen::VectorXd>(ct.data(), ct.size());
    return q;
  }

  double operator()(double y) const {
    const Eigen::Index m = eval_source.size();
    if (y <= eval_source(0)) return y + (eval_target(0) - eval_source(0));
    if (y >= eval_source(m - 1))
      return y + (eval_target(m - 1) - eval_source(m - 1));
    // first knot strictly greater than y; y is interior so 1 <= hi <= m-1
    const double* begin = eval_source.data();
    const Eigen::Index hi = std::upper_bound(begin, begin + m, y) - begin;
    const Eigen::Index lo = hi - 1;
    const double frac =
        (y - eval_source(lo)) / (eval_source(hi) - eval_source(lo));
    return eval_target(lo) + frac * (eval_target(hi) - eval_target(lo));
  }
};

// One group's affine transport map y -> barycenter_mean + linear (y - mean).
struct AffineMapZ {
  Eigen::VectorXd mean;     // group mean m_z
  Eigen::MatrixXd linear;   // symmetric PSD factor A_z
};

// A fitted barycenter post-processing model: per-group transport maps onto the
// common barycenter plus the projection loss V (root mean squared displacement
// of the full projection over the training data).
struct BarycenterModel {
  enum class Variant { quantile, affine };

  Variant variant = Variant::quantile;
  Eigen::Index k = 1;
  std::map<std::string, double> weights;

  std::map<std::string, QuantileKnots> quantile_maps;  // variant == quantile

  std::map<std::string, AffineMapZ> affine_maps;       // variant == affine
  Eigen::VectorXd barycenter_mean;
  Eigen::MatrixXd barycenter_cov;

  double projection_loss = 0.0;  // V
};

// Full transport of one sample onto the barycenter.
inline Eigen::VectorXd apply_map(const BarycenterModel& model,
                                 const Eigen::VectorXd& y,
                                 const std::string& label) {
  if (y.size() != model.k)
    throw DimensionError("sample has dimension " + std::to_string(y.size()) +
                         ", model expects " + std::to_string(model.k));
  if (!y.allFinite()) throw ValidationError("sample is not finite");
  if (model.variant == BarycenterModel::Variant::quantile) {
    auto it = model.quantile_maps.find(label);
    if (it == model.quantile_maps.end())
      throw LookupError("model has no group '" + label + "'");
    Eigen::VectorXd out(1);
    out(0) = it->second(y(0));
    return out;
  }
  auto it = model.affine_maps.find(label);
  if (it == model.affine_maps.end())
    throw LookupError("model has no group '" + label + "'");
  return model.barycenter_mean + it->second.linear * (y - it->second.mean);
}

// Scalar convenience for 1-D models.
inline double apply_map1(const BarycenterModel& model, double y,
                         const std::string& label) {
  Eigen::VectorXd v(1);
  v(0) = y;
  return apply_map(model, v, label)(0);
}

namespace detail {

inline double rms_displacement(const BarycenterModel& model,
                               const GroupedDataset& ds) {
  double acc = 0.0;
  for (const auto& [label, mat] : ds.groups()) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      Eigen::VectorXd y = mat.row(i).transpose();
      acc += (apply_map(model, y, label) - y).squaredNorm();
    }
  }
  return std::sqrt(acc / static_cast<double>(ds.total_n()));
}

}  // namespace detail

// 1-D barycenter by quantile averaging. The barycenter quantile function is
// the weight-averaged group quantile function; each sample's target is the
// barycenter quantile at the sample's own midpoint rank. Exact (not iterative)
// in one dimension.
inline BarycenterModel fit_quantile_barycenter(const GroupedDataset& ds) {
  if (ds.k() != 1)
    throw DimensionError("quantile variant needs 1-D outcomes, got k = " +
                         std::to_string(ds.k()));
  BarycenterModel model;
  model.variant = BarycenterModel::Variant::quantile;
  model.k = 1;
  model.weights = group_weights(ds);

  std::map<std::string, Eigen::VectorXd> sorted;
  for (const auto& [label, mat] : ds.groups())
    sorted.emplace(label, sorted_quantiles(mat));

  auto barycenter_quantile = [&](double u) {
    double q = 0.0;
    for (const auto& [label, vec] : sorted)
      q += model.weights.at(label) * quantile_eval(vec, u);
    return q;
  };

  for (const auto& [label, vec] : sorted) {
    const Eigen::Index n = vec.size();
    Eigen::VectorXd ranks = midpoint_ranks(n);
    Eigen::VectorXd targets(n);
    for (Eigen::Index i = 0; i < n; ++i)
      targets(i) = barycenter_quantile(ranks(i));
    model.quantile_maps.emplace(label, QuantileKnots::make(vec, targets));
  }

  // V is the loss of the map actually applied, so with tied samples the
  // collapsed evaluation knots are what counts
  model.projection_loss = detail::rms_displacement(model, ds);
  return model;
}

// Gaussian-family barycenter: group moments, covariance fixed point, and the
// per-group affine optimal-transport factor
//   A_z = Sigma_z^-1/2 (Sigma_z^1/2 Sbar Sigma_z^1/2)^1/2 Sigma_z^-1/2.
// Covariances are jittered onto the SPD cone first (see regularize_spd).
inline BarycenterModel fit_affine_barycenter(const GroupedDataset& ds,
                                             double fp_tol = 1e-10,
                                             int fp_max_iter = 1000) {
  BarycenterModel model;
  model.variant = BarycenterModel::Variant::affine;
  model.k = ds.k();
  model.weights = group_weights(ds);

  std::vector<std::string> labels = ds.labels();
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  std::vector<double> w;
  for (const auto& label : labels) {
    const Eigen::MatrixXd& mat = ds.group(label);
    if (mat.rows() < 2)
      throw ValidationError("group '" + label +
                            "' has fewer than 2 samples; the affine variant "
                            "needs a covariance estimate");
    Eigen::VectorXd m = mat.colwise().mean().transpose();
    Eigen::MatrixXd centered = mat.rowwise() - m.transpose();
    Eigen::MatrixXd cov = centered.transpose() * centered /
                          static_cast<double>(mat.rows() - 1);
    means.push_back(std::move(m));
    covs.push_back(regularize_spd(cov));
    w.push_back(model.weights.at(label));
  }

  Eigen::MatrixXd sbar = bures_fixed_point(covs, w, fp_tol, fp_max_iter);

  model.barycenter_mean = Eigen::VectorXd::Zero(model.k);
  for (std::size_t z = 0; z < labels.size(); ++z)
    model.barycenter_mean += w[z] * means[z];
  model.barycenter_cov = sbar;

  for (std::size_t z = 0; z < labels.size(); ++z) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covs[z]);
    if (es.info() != Eigen::Success)
      throw ValidationError("eigendecomposition failed for group '" +
                            labels[z] + "'");
    if (es.eigenvalues().minCoeff() <= 0)
      throw ValidationError("covariance of group '" + labels[z] +
                            "' is singular after regularization");
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::MatrixXd half = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                           es.eigenvectors().transpose();
    Eigen::MatrixXd invhalf = es.eigenvectors() *
                              ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                              es.eigenvectors().transpose();
    Eigen::MatrixXd inner = detail::psd_sqrt_clip(half * sbar * half);
    Eigen::MatrixXd a = invhalf * inner * invhalf;
    AffineMapZ am;
    am.mean = means[z];
    am.linear = 0.5 * (a + a.transpose());
    model.affine_maps.emplace(labels[z], std::move(am));
  }

  model.projection_loss = detail::rms_displacement(model, ds);
  return model;
}

}  // namespace fairpost
