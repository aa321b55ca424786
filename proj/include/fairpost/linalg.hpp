#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "fairpost/errors.hpp"

namespace fairpost {

namespace detail {

// Symmetrize, eigendecompose, clip tiny negative eigenvalues relative to the
// largest magnitude, and rebuild with f applied to the spectrum. Used where
// the argument is symmetric by construction and only roundoff breaks it.
template <typename F>
Eigen::MatrixXd spectral_apply(const Eigen::MatrixXd& m, F&& f) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ValidationError("eigendecomposition failed");
  Eigen::VectorXd d = es.eigenvalues();
  const double scale = std::max(std::abs(d(0)), std::abs(d(d.size() - 1)));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < 0 && d(i) > -1e-12 * std::max(scale, 1.0)) d(i) = 0.0;
    d(i) = f(d(i));
  }
  Eigen::MatrixXd out =
      es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

inline Eigen::MatrixXd psd_sqrt_clip(const Eigen::MatrixXd& m) {
  return spectral_apply(m, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

}  // namespace detail

// Symmetric PSD square root via eigendecomposition. Rejects matrices that are
// asymmetric beyond 1e-10 or have an eigenvalue below -1e-10; eigenvalues in
// [-1e-10, 0) are clipped to zero.
inline Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw DimensionError("sqrtm_psd expects a square matrix");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw ValidationError("matrix is not symmetric (max asymmetry " +
                          std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success)
    throw ValidationError("eigendecomposition failed");
  Eigen::VectorXd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < -1e-10)
      throw ValidationError("matrix is not PSD (eigenvalue " +
                            std::to_string(d(i)) + ")");
    if (d(i) < 0) d(i) = 0.0;
    d(i) = std::sqrt(d(i));
  }
  Eigen::MatrixXd s =
      es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

// Jitters a near-singular covariance onto the SPD cone: if the smallest
// eigenvalue is below 1e-9, add 1e-9 * trace/k to the diagonal.
inline Eigen::MatrixXd regularize_spd(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols())
    throw DimensionError("regularize_spd expects a square matrix");
  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ValidationError("eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < 1e-9) {
    const double jitter = 1e-9 * sym.trace() / static_cast<double>(sym.rows());
    sym += std::max(jitter, 1e-12) *
           Eigen::MatrixXd::Identity(sym.rows(), sym.cols());
  }
  return sym;
}

// Largest singular value.
inline double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Frobenius norm of S - sum_z w_z (S^1/2 Sigma_z S^1/2)^1/2, the defect of
// the barycenter covariance fixed-point equation.
inline double bures_residual(const Eigen::MatrixXd& s,
                             const std::vector<Eigen::MatrixXd>& covs,
                             const std::vector<double>& weights) {
  Eigen::MatrixXd shalf = detail::psd_sqrt_clip(s);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(s.rows(), s.cols());
  for (std::size_t z = 0; z < covs.size(); ++z)
    acc += weights[z] * detail::psd_sqrt_clip(shalf * covs[z] * shalf);
  return (s - acc).norm();
}

// Barycenter covariance of Gaussians by fixed-point iteration:
//   S <- S^-1/2 (sum_z w_z (S^1/2 Sigma_z S^1/2)^1/2)^2 S^-1/2
// starting from the weighted arithmetic mean. Stops when the fixed-point
// residual (Frobenius) drops to tol; throws ConvergenceError past max_iter.
inline Eigen::MatrixXd bures_fixed_point(const std::vector<Eigen::MatrixXd>& covs,
                                         const std::vector<double>& weights,
                                         double tol = 1e-10,
                                         int max_iter = 1000) {
  if (covs.empty()) throw ValidationError("no covariances given");
  if (covs.size() != weights.size())
    throw DimensionError("covariance/weight count mismatch");
  const Eigen::Index k = covs[0].rows();
  double wsum = 0.0;
  for (std::size_t z = 0; z < covs.size(); ++z) {
    if (covs[z].rows() != k || covs[z].cols() != k)
      throw DimensionError("covariances must all be " + std::to_string(k) +
                           "x" + std::to_string(k));
    if ((covs[z] - covs[z].transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError("covariance " + std::to_string(z) +
                            " is not symmetric");
    if (weights[z] < 0) throw ValidationError("negative weight");
    wsum += weights[z];
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw ValidationError("weights sum to " + std::to_string(wsum) +
                          ", expected 1");

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t z = 0; z < covs.size(); ++z) s += weights[z] * covs[z];

  double res = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
      throw ValidationError("eigendecomposition failed in fixed point");
    if (es.eigenvalues().minCoeff() <= 0)
      throw ValidationError("fixed-point iterate lost positive definiteness; "
                            "regularize the input covariances");
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::MatrixXd shalf = es.eigenvectors() *
                            ev.cwiseSqrt().asDiagonal() *
                            es.eigenvectors().transpose();
    Eigen::MatrixXd sinvhalf = es.eigenvectors() *
                               ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                               es.eigenvectors().transpose();
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t z = 0; z < covs.size(); ++z)
      mean += weights[z] * detail::psd_sqrt_clip(shalf * covs[z] * shalf);
    res = (s - mean).norm();
    if (res <= tol) return s;
    Eigen::MatrixXd next = sinvhalf * mean * mean * sinvhalf;
    s = 0.5 * (next + next.transpose());
  }
  // one last residual check: the final update may have landed inside tol
  res = bures_residual(s, covs, weights);
  if (res <= tol) return s;
  throw ConvergenceError("barycenter covariance fixed point did not reach " +
                             std::to_string(tol) + " in " +
                             std::to_string(max_iter) + " iterations",
                         res);
}

}  // namespace fairpost
