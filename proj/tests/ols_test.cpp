#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fairpost/ols.hpp"
#include "oracle.hpp"

using namespace fairpost;

TEST_CASE("exactly linear data is recovered") {
  // y = 2 x1 - x2 + 3
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  Eigen::MatrixXd x(40, 2);
  Eigen::MatrixXd y(40, 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = unit(rng);
    x(i, 1) = unit(rng);
    y(i, 0) = 2.0 * x(i, 0) - x(i, 1) + 3.0;
  }
  OLSModel model = fit_ols(x, y);
  CHECK_FALSE(model.rank_deficient);
  CHECK(model.normal_residual <= 1e-8);
  CHECK(std::abs(model.weights(0, 0) - 2.0) <= 1e-8);
  CHECK(std::abs(model.weights(1, 0) + 1.0) <= 1e-8);
  CHECK(std::abs(model.intercept(0) - 3.0) <= 1e-8);
  CHECK((model.predict(x) - y).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("rank-deficient designs fall back to the minimum-norm solution") {
  // second column duplicates the first
  Eigen::MatrixXd x(6, 2);
  x << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6;
  Eigen::MatrixXd y(6, 1);
  y << 2, 4, 6, 8, 10, 12;  // y = 2 x1
  OLSModel model = fit_ols(x, y);
  CHECK(model.rank_deficient);
  CHECK(model.weights.allFinite());
  CHECK(model.normal_residual <= 1e-8);
  CHECK((model.predict(x) - y).cwiseAbs().maxCoeff() <= 1e-8);
  // minimum norm splits the coefficient across the duplicated columns
  CHECK(std::abs(model.weights(0, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(model.weights(1, 0) - 1.0) <= 1e-8);
}

TEST_CASE("noisy data keeps a small normal residual") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  Eigen::MatrixXd x(200, 3);
  Eigen::MatrixXd y(200, 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = unit(rng);
    y(i, 0) = x(i, 0) - 0.5 * x(i, 2) + noise(rng);
    y(i, 1) = 0.25 * x(i, 1) + 1.0 + noise(rng);
  }
  OLSModel model = fit_ols(x, y);
  CHECK(model.normal_residual <= 1e-10);
  CHECK_FALSE(model.rank_deficient);
  CHECK(std::abs(model.weights(0, 0) - 1.0) <= 0.1);
  CHECK(std::abs(model.weights(1, 1) - 0.25) <= 0.1);
}

TEST_CASE("lipschitz constant is the top singular value") {
  OLSModel model;
  model.weights = Eigen::MatrixXd(2, 2);
  model.weights << 3, 0, 0, -5;
  model.intercept = Eigen::RowVectorXd::Zero(2);
  CHECK(model.lipschitz_constant() == 5.0);

  // and it really bounds prediction gaps
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a(1, 2), b(1, 2);
    a << unit(rng), unit(rng);
    b << unit(rng), unit(rng);
    const double gap = (model.predict(a) - model.predict(b)).norm();
    CHECK(gap <= 5.0 * (a - b).norm() + 1e-12);
  }
}

TEST_CASE("fit validation") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
  Eigen::MatrixXd y = Eigen::MatrixXd::Random(4, 1);
  CHECK_THROWS_AS(fit_ols(x, y), DimensionError);
  CHECK_THROWS_AS(fit_ols(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 1)),
                  ValidationError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Random(5, 1);
  bad(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_ols(x, bad), ValidationError);

  OLSModel model = fit_ols(x, Eigen::MatrixXd::Random(5, 1));
  CHECK_THROWS_AS(model.predict(Eigen::MatrixXd::Random(3, 4)),
                  DimensionError);
}
