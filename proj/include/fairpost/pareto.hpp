#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fairpost/barycenter.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/disparity.hpp"

namespace fairpost {

// Interpolation coefficient for a disparity tolerance d: the optimal
// post-processing at tolerance d moves each sample the fraction
// t = 1 - d / (sqrt(2) V) of the way to its full-projection target, with t = 0
// (identity) once d covers the model's own disparity sqrt(2) V.
inline double t_for_tolerance(double v, double d) {
  if (!(v >= 0.0)) throw ValidationError("projection loss must be >= 0");
  if (!(d >= 0.0)) throw ValidationError("tolerance must be >= 0");
  if (v == 0.0) return 0.0;
  const double full = std::sqrt(2.0) * v;
  if (d >= full) return 0.0;
  double t = 1.0 - d / full;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return t;
}

// Moves every sample the tolerance-determined fraction of the way to its
// transport target: y -> (1 - t) y + t f*(y). At t = 0 the input comes back
// bit-exact; at t = 1 this is the full projection.
inline GroupedDataset transform(const GroupedDataset& ds,
                                const BarycenterModel& model, double d) {
  if (ds.k() != model.k)
    throw DimensionError("dataset dimension " + std::to_string(ds.k()) +
                         " does not match model dimension " +
                         std::to_string(model.k));
  const double t = t_for_tolerance(model.projection_loss, d);
  if (t == 0.0) return ds;
  std::map<std::string, Eigen::MatrixXd> out;
  for (const auto& [label, mat] : ds.groups()) {
    Eigen::MatrixXd moved(mat.rows(), mat.cols());
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      Eigen::VectorXd y = mat.row(i).transpose();
      moved.row(i) =
          ((1.0 - t) * y + t * apply_map(model, y, label)).transpose();
    }
    out.emplace(label, std::move(moved));
  }
  return GroupedDataset::from_groups(std::move(out));
}

struct ParetoPoint {
  double d = 0.0;                   // requested tolerance
  double t = 0.0;                   // interpolation coefficient used
  double l2_loss = 0.0;             // rms displacement from the input
  double measured_disparity = 0.0;  // disparity of the transformed data
};

// Sweeps the loss/disparity frontier over a tolerance grid. Each point records
// the rms displacement actually incurred and the disparity re-measured on the
// transformed data (quantile models measure 1-D, affine models Gaussian
// closed form).
inline std::vector<ParetoPoint> frontier(const GroupedDataset& ds,
                                         const BarycenterModel& model,
                                         const std::vector<double>& d_grid) {
  if (d_grid.empty()) throw ValidationError("tolerance grid is empty");
  for (double d : d_grid)
    if (!(d >= 0.0))
      throw ValidationError("tolerance grid has a negative entry");
  const DisparityMethod method =
      model.variant == BarycenterModel::Variant::quantile
          ? DisparityMethod::quantile1d
          : DisparityMethod::bures;

  std::vector<ParetoPoint> points;
  points.reserve(d_grid.size());
  for (double d : d_grid) {
    ParetoPoint p;
    p.d = d;
    p.t = t_for_tolerance(model.projection_loss, d);
    GroupedDataset moved = transform(ds, model, d);
    double acc = 0.0;
    for (const auto& [label, mat] : ds.groups())
      acc += (moved.group(label) - mat).squaredNorm();
    p.l2_loss = std::sqrt(acc / static_cast<double>(ds.total_n()));
    p.measured_disparity = wasserstein_disparity(moved, method).disparity;
    points.push_back(p);
  }
  return points;
}

}  // namespace fairpost
