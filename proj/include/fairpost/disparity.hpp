#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fairpost/barycenter.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/linalg.hpp"
#include "fairpost/quantile.hpp"

namespace fairpost {

enum class DisparityMethod { quantile1d, bures, exact_assignment };

inline std::string to_string(DisparityMethod m) {
  switch (m) {
    case DisparityMethod::quantile1d: return "quantile1d";
    case DisparityMethod::bures: return "bures";
    case DisparityMethod::exact_assignment: return "exact_assignment";
  }
  return "?";
}

// W2 between two 1-D samples. Equal sizes reduce to sorted matching; unequal
// sizes integrate the squared quantile gap over the union of the two midpoint
// rank grids, each node weighted by its surrounding cell.
inline double w2_1d(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0 || b.size() == 0)
    throw ValidationError("w2_1d needs non-empty samples");
  Eigen::VectorXd sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa.size() == sb.size()) {
    return std::sqrt((sa - sb).squaredNorm() /
                     static_cast<double>(sa.size()));
  }
  std::vector<double> grid = union_rank_grid(sa.size(), sb.size());
  std::vector<double> w = cell_weights(grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gap = quantile_eval(sa, grid[i]) - quantile_eval(sb, grid[i]);
    acc += w[i] * gap * gap;
  }
  return std::sqrt(acc);
}

// Closed-form W2 between Gaussians:
//   W2^2 = |m1 - m2|^2 + tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2)
// The trace term is clipped at zero against roundoff.
inline double w2_bures(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                       const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2) {
  if (m1.size() != m2.size())
    throw DimensionError("mean dimensions differ");
  if (s1.rows() != m1.size() || s1.cols() != m1.size() ||
      s2.rows() != m2.size() || s2.cols() != m2.size())
    throw DimensionError("covariance shape does not match mean dimension");
  Eigen::MatrixXd h1 = sqrtm_psd(s1);
  Eigen::MatrixXd cross = detail::psd_sqrt_clip(h1 * s2 * h1);
  double sq = (m1 - m2).squaredNorm() + s1.trace() + s2.trace() -
              2.0 * cross.trace();
  return std::sqrt(std::max(sq, 0.0));
}

// Exact W2 between equal-size point clouds by scanning every assignment.
// Factorial cost, so the size is capped at 10.
inline double w2_exact_small(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows())
    throw UnsupportedError("exact assignment needs equal sample counts, got " +
                           std::to_string(a.rows()) + " and " +
                           std::to_string(b.rows()));
  if (a.cols() != b.cols())
    throw DimensionError("sample dimensions differ");
  const Eigen::Index n = a.rows();
  if (n == 0) throw ValidationError("empty samples");
  if (n > 10)
    throw UnsupportedError("exact assignment capped at 10 samples, got " +
                           std::to_string(n));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      cost += (a.row(i) - b.row(perm[static_cast<std::size_t>(i)]))
                  .squaredNorm();
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(n));
}

// Pairwise W2 table plus the aggregate disparity
//   D^2 = sum over ordered label pairs of lambda_z1 lambda_z2 W2(z1, z2)^2
// (diagonal terms are zero). D vanishes exactly when all group distributions
// coincide, i.e. when the outcome carries no group information.
struct DisparityReport {
  std::map<std::pair<std::string, std::string>, double> pairwise;
  double disparity = 0.0;
  DisparityMethod method = DisparityMethod::quantile1d;
};

inline DisparityReport wasserstein_disparity(const GroupedDataset& ds,
                                             DisparityMethod method) {
  if (method == DisparityMethod::quantile1d && ds.k() != 1)
    throw DimensionError("quantile1d disparity needs 1-D outcomes, got k = " +
                         std::to_string(ds.k()));

  std::vector<std::string> labels = ds.labels();
  std::map<std::string, double> w = group_weights(ds);

  // per-group summaries for the bures method
  std::map<std::string, Eigen::VectorXd> means;
  std::map<std::string, Eigen::MatrixXd> covs;
  if (method == DisparityMethod::bures) {
    for (const auto& label : labels) {
      const Eigen::MatrixXd& mat = ds.group(label);
      if (mat.rows() < 2)
        throw ValidationError("group '" + label +
                              "' has fewer than 2 samples; the bures method "
                              "needs a covariance estimate");
      Eigen::VectorXd m = mat.colwise().mean().transpose();
      Eigen::MatrixXd centered = mat.rowwise() - m.transpose();
      covs[label] = centered.transpose() * centered /
                    static_cast<double>(mat.rows() - 1);
      means[label] = std::move(m);
    }
  }

  DisparityReport report;
  report.method = method;
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    report.pairwise[{labels[i], labels[i]}] = 0.0;
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const std::string& a = labels[i];
      const std::string& b = labels[j];
      double dist = 0.0;
      switch (method) {
        case DisparityMethod::quantile1d:
          dist = w2_1d(ds.group(a).col(0), ds.group(b).col(0));
          break;
        case DisparityMethod::bures:
          dist = w2_bures(means[a], covs[a], means[b], covs[b]);
          break;
        case DisparityMethod::exact_assignment:
          dist = w2_exact_small(ds.group(a), ds.group(b));
          break;
      }
      report.pairwise[{a, b}] = dist;
      report.pairwise[{b, a}] = dist;
      acc += 2.0 * w.at(a) * w.at(b) * dist * dist;
    }
  }
  report.disparity = std::sqrt(acc);
  return report;
}

// Root mean squared displacement of the model's full projection over a
// dataset. For the training data this recovers model.projection_loss.
inline double projection_loss(const BarycenterModel& model,
                              const GroupedDataset& ds) {
  return detail::rms_displacement(model, ds);
}

}  // namespace fairpost
