#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fairpost/linalg.hpp"

using namespace fairpost;

TEST_CASE("sqrtm_psd on easy matrices") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK((sqrtm_psd(eye) - eye).norm() <= 1e-14);

  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 9;
  Eigen::MatrixXd s = sqrtm_psd(d);
  CHECK(std::abs(s(0, 0) - 2.0) <= 1e-12);
  CHECK(std::abs(s(1, 1) - 3.0) <= 1e-12);
  CHECK(std::abs(s(0, 1)) <= 1e-12);
}

TEST_CASE("sqrtm_psd reconstructs a rotated spectrum") {
  const double th = 0.7;
  Eigen::MatrixXd r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 1;
  Eigen::MatrixXd m = r * d * r.transpose();
  Eigen::MatrixXd s = sqrtm_psd(m);
  CHECK((s * s - m).norm() / m.norm() <= 1e-8);
  CHECK((s - s.transpose()).norm() <= 1e-12);
}

TEST_CASE("sqrtm_psd rejects bad input") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 1, 0, 1;
  CHECK_THROWS_AS(sqrtm_psd(asym), ValidationError);

  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(sqrtm_psd(indef), ValidationError);

  CHECK_THROWS_AS(sqrtm_psd(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
}

TEST_CASE("regularize_spd jitters only near-singular matrices") {
  Eigen::MatrixXd good(2, 2);
  good << 2, 0, 0, 3;
  CHECK(regularize_spd(good) == good);

  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
  singular(0, 0) = 2.0;  // rank 1
  Eigen::MatrixXd fixed = regularize_spd(singular);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fixed);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK((fixed - singular).norm() <= 1e-8);
}

TEST_CASE("operator_norm is the top singular value") {
  Eigen::MatrixXd m(2, 2);
  m << 3, 0, 0, -5;
  CHECK(std::abs(operator_norm(m) - 5.0) <= 1e-12);
  CHECK(operator_norm(Eigen::MatrixXd::Zero(2, 2)) == 0.0);
}

TEST_CASE("bures fixed point: equal covariances are already the answer") {
  Eigen::MatrixXd c(2, 2);
  c << 2, 0.5, 0.5, 1;
  std::vector<Eigen::MatrixXd> covs{c, c, c};
  std::vector<double> w{0.2, 0.3, 0.5};
  Eigen::MatrixXd sbar = bures_fixed_point(covs, w);
  CHECK((sbar - c).norm() <= 1e-9);
}

TEST_CASE("bures fixed point: 1-D variances average by standard deviation") {
  std::vector<Eigen::MatrixXd> covs{Eigen::MatrixXd::Constant(1, 1, 1.0),
                                    Eigen::MatrixXd::Constant(1, 1, 4.0)};
  std::vector<double> w{0.5, 0.5};
  Eigen::MatrixXd sbar = bures_fixed_point(covs, w);
  CHECK(std::abs(sbar(0, 0) - 2.25) <= 1e-8);
}

TEST_CASE("bures fixed point: commuting diagonals go coordinate-wise") {
  Eigen::MatrixXd c1(2, 2), c2(2, 2);
  c1 << 1, 0, 0, 4;
  c2 << 4, 0, 0, 1;
  Eigen::MatrixXd sbar = bures_fixed_point({c1, c2}, {0.5, 0.5});
  CHECK(std::abs(sbar(0, 0) - 2.25) <= 1e-8);
  CHECK(std::abs(sbar(1, 1) - 2.25) <= 1e-8);
  CHECK(std::abs(sbar(0, 1)) <= 1e-8);
  CHECK(bures_residual(sbar, {c1, c2}, {0.5, 0.5}) <= 1e-10);
}

TEST_CASE("bures fixed point: non-commuting case satisfies the equation") {
  const double th = 0.4;
  Eigen::MatrixXd r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::MatrixXd d1(2, 2), d2(2, 2);
  d1 << 1, 0, 0, 5;
  d2 << 3, 0, 0, 0.5;
  Eigen::MatrixXd c1 = d1;
  Eigen::MatrixXd c2 = r * d2 * r.transpose();
  Eigen::MatrixXd sbar = bures_fixed_point({c1, c2}, {0.3, 0.7});
  CHECK(bures_residual(sbar, {c1, c2}, {0.3, 0.7}) <= 1e-10);
}

TEST_CASE("bures fixed point error paths") {
  Eigen::MatrixXd c1 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd c2 = 4.0 * Eigen::MatrixXd::Identity(2, 2);
  // weights off by far more than the tolerance
  CHECK_THROWS_AS(bures_fixed_point({c1, c2}, {0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(bures_fixed_point({c1}, {0.5, 0.5}), DimensionError);
  // zero iterations allowed: must report the residual it could not clear
  try {
    bures_fixed_point({c1, c2}, {0.5, 0.5}, 1e-10, 0);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 1e-10);
  }
}
