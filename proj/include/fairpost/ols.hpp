#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fairpost/errors.hpp"
#include "fairpost/linalg.hpp"

namespace fairpost {

// Linear least-squares predictor X -> X W + b. Solved through a complete
// orthogonal decomposition, so rank-deficient designs get the minimum-norm
// solution instead of an error; rank_deficient flags that case.
struct OLSModel {
  Eigen::MatrixXd weights;       // p x k
  Eigen::RowVectorXd intercept;  // 1 x k
  double normal_residual = 0.0;  // relative residual of the normal equations
  bool rank_deficient = false;

  Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const {
    if (x.cols() != weights.rows())
      throw DimensionError("design has " + std::to_string(x.cols()) +
                           " features, model expects " +
                           std::to_string(weights.rows()));
    return (x * weights).rowwise() + intercept;
  }

  // Smallest K with |predict(x1) - predict(x2)| <= K |x1 - x2|: the largest
  // singular value of the weight matrix.
  double lipschitz_constant() const { return operator_norm(weights); }
};

inline OLSModel fit_ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows())
    throw DimensionError("design and response row counts differ");
  if (x.rows() == 0) throw ValidationError("empty training data");
  if (!x.allFinite() || !y.allFinite())
    throw ValidationError("training data contains non-finite values");

  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd design(n, p + 1);
  design.leftCols(p) = x;
  design.col(p).setOnes();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  Eigen::MatrixXd coef = cod.solve(y);

  OLSModel model;
  model.weights = coef.topRows(p);
  model.intercept = coef.row(p);
  model.rank_deficient = cod.rank() < p + 1;

  // residual of the normal equations, scaled; a healthy solve sits near
  // machine precision
  Eigen::MatrixXd grad = design.transpose() * (design * coef - y);
  const double scale = std::max(1.0, (design.transpose() * y).norm());
  model.normal_residual = grad.norm() / scale;
  return model;
}

}  // namespace fairpost
