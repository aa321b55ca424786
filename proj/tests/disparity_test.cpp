#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fairpost/disparity.hpp"
#include "oracle.hpp"

using namespace fairpost;

TEST_CASE("w2_1d on matched sizes is sorted matching") {
  CHECK(w2_1d(oracle::col({0, 2}).col(0), oracle::col({1, 3}).col(0)) == 1.0);
  CHECK(w2_1d(oracle::col({2, 0}).col(0), oracle::col({3, 1}).col(0)) == 1.0);
  Eigen::VectorXd a = oracle::col({0.3, -1.2, 4.0}).col(0);
  CHECK(w2_1d(a, a) == 0.0);
  CHECK(w2_1d(oracle::col({0}).col(0), oracle::col({3}).col(0)) == 3.0);
  CHECK_THROWS_AS(w2_1d(Eigen::VectorXd(), a), ValidationError);
}

TEST_CASE("w2_1d on unequal sizes integrates over the union rank grid") {
  // {0,1} vs {0.5}: nodes {0.25, 0.5, 0.75} with cell weights
  // {0.375, 0.25, 0.375}; gaps -0.5, 0, 0.5
  const double got =
      w2_1d(oracle::col({0, 1}).col(0), oracle::col({0.5}).col(0));
  CHECK(std::abs(got - std::sqrt(0.1875)) <= 1e-12);
}

TEST_CASE("w2_bures closed form") {
  Eigen::VectorXd m0 = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd m2 = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::MatrixXd c1 = Eigen::MatrixXd::Constant(1, 1, 1.0);
  Eigen::MatrixXd c4 = Eigen::MatrixXd::Constant(1, 1, 4.0);
  CHECK(std::abs(w2_bures(m0, c1, m2, c1) - 2.0) <= 1e-12);
  CHECK(w2_bures(m2, c4, m2, c4) <= 1e-12);
  CHECK(std::abs(w2_bures(m0, c1, m0, c4) - 1.0) <= 1e-12);

  // multivariate sanity: commuting covariances reduce coordinate-wise
  Eigen::VectorXd z2 = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd d1(2, 2), d2(2, 2);
  d1 << 1, 0, 0, 4;
  d2 << 4, 0, 0, 1;
  // per-coordinate |sigma gaps| are 1 each: W2^2 = 1 + 1
  CHECK(std::abs(w2_bures(z2, d1, z2, d2) - std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("w2_exact_small enumerates assignments") {
  CHECK(w2_exact_small(oracle::col({0, 2}), oracle::col({1, 3})) == 1.0);
  Eigen::MatrixXd a(2, 2);
  a << 0, 0, 1, 1;
  Eigen::MatrixXd b(2, 2);
  b << 1, 1, 0, 0;
  CHECK(w2_exact_small(a, b) == 0.0);
  CHECK(w2_exact_small(a, a) == 0.0);

  CHECK_THROWS_AS(w2_exact_small(oracle::col({0, 1}), oracle::col({0})),
                  UnsupportedError);
  CHECK_THROWS_AS(
      w2_exact_small(Eigen::MatrixXd::Zero(11, 1), Eigen::MatrixXd::Zero(11, 1)),
      UnsupportedError);
  CHECK_THROWS_AS(
      w2_exact_small(Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(2, 2)),
      DimensionError);
}

TEST_CASE("disparity of the two-point instance") {
  DisparityReport r = wasserstein_disparity(oracle::two_point(),
                                            DisparityMethod::quantile1d);
  CHECK(r.disparity == std::sqrt(0.5));
  CHECK(r.pairwise.at({"A", "B"}) == 1.0);
  CHECK(r.pairwise.at({"B", "A"}) == 1.0);
  CHECK(r.pairwise.at({"A", "A"}) == 0.0);
}

TEST_CASE("identical groups have zero disparity") {
  GroupedDataset ds = oracle::ds1({{"A", {1, 2, 3}}, {"B", {1, 2, 3}}});
  CHECK(wasserstein_disparity(ds, DisparityMethod::quantile1d).disparity ==
        0.0);
}

TEST_CASE("three groups, one shifted: ordered-pair enumeration") {
  // two identical quarters plus a half shifted by 3; the 9 ordered pairs
  // contribute 4 * (1/8) * 9 = 4.5
  GroupedDataset ds =
      oracle::ds1({{"A", {0}}, {"B", {0}}, {"C", {3, 3}}});
  DisparityReport r = wasserstein_disparity(ds, DisparityMethod::quantile1d);
  CHECK(std::abs(r.disparity - std::sqrt(4.5)) <= 1e-12);
  CHECK(std::abs(r.disparity - 2.1213203435596424) <= 1e-12);
  CHECK(r.pairwise.at({"A", "C"}) == 3.0);
  CHECK(r.pairwise.at({"A", "B"}) == 0.0);

  // the oracle summation over ordered pairs agrees
  const double d_oracle = oracle::disparity_from_pairs(
      {0.25, 0.25, 0.5}, {{0, 0, 3}, {0, 0, 3}, {3, 3, 0}});
  CHECK(std::abs(r.disparity - d_oracle) <= 1e-12);
}

TEST_CASE("report invariants on random data") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-4.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, std::vector<double>> groups;
    const int g = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < g; ++i) {
      std::vector<double> v(1 + rng() % 9);
      for (auto& x : v) x = unit(rng);
      groups["g" + std::to_string(i)] = v;
    }
    GroupedDataset ds = oracle::ds1(groups);
    DisparityReport r = wasserstein_disparity(ds, DisparityMethod::quantile1d);
    auto w = group_weights(ds);
    double acc = 0.0;
    for (const auto& [pair, dist] : r.pairwise) {
      CHECK(dist == r.pairwise.at({pair.second, pair.first}));
      if (pair.first == pair.second) CHECK(dist == 0.0);
      acc += w.at(pair.first) * w.at(pair.second) * dist * dist;
    }
    CHECK(std::abs(r.disparity * r.disparity - acc) <=
          1e-10 * std::max(1.0, acc));
  }
}

TEST_CASE("quantile matching agrees with the assignment oracle") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(-5.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 8);
    Eigen::MatrixXd a(n, 1), b(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, 0) = unit(rng);
      b(i, 0) = unit(rng);
    }
    const double lib = w2_1d(a.col(0), b.col(0));
    CHECK(std::abs(lib - w2_exact_small(a, b)) <= 1e-12);
    CHECK(std::abs(lib - oracle::assignment_w2(a, b)) <= 1e-12);
  }
}

TEST_CASE("parity characterization: D vanishes only with matching groups") {
  // forward: built identical -> 0 (above). backward: any gap forces D > 0
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> base(5);
    for (auto& x : base) x = unit(rng);
    std::vector<double> shifted = base;
    shifted[static_cast<std::size_t>(rng() % 5)] += 0.37;
    GroupedDataset ds = oracle::ds1({{"A", base}, {"B", shifted}});
    DisparityReport r = wasserstein_disparity(ds, DisparityMethod::quantile1d);
    CHECK(r.disparity > 0.0);
    CHECK(r.pairwise.at({"A", "B"}) > 0.0);
  }
}

TEST_CASE("two equal groups: D = sqrt(2) V") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(12), b(12);
    for (auto& x : a) x = unit(rng);
    for (auto& x : b) x = unit(rng);
    GroupedDataset ds = oracle::ds1({{"A", a}, {"B", b}});
    const double d =
        wasserstein_disparity(ds, DisparityMethod::quantile1d).disparity;
    const double v = fit_quantile_barycenter(ds).projection_loss;
    CHECK(std::abs(d - std::sqrt(2.0) * v) <= 1e-8);
  }
}

TEST_CASE("triangle inequality across random small clouds") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 5);
    Eigen::VectorXd a(n), b(n), c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i) = unit(rng);
      b(i) = unit(rng);
      c(i) = unit(rng);
    }
    CHECK(w2_1d(a, c) <= w2_1d(a, b) + w2_1d(b, c) + 1e-10);
  }
}

TEST_CASE("method preconditions") {
  std::map<std::string, Eigen::MatrixXd> groups;
  groups["A"] = Eigen::MatrixXd::Random(4, 2);
  groups["B"] = Eigen::MatrixXd::Random(4, 2);
  GroupedDataset ds2d = GroupedDataset::from_groups(groups);
  CHECK_THROWS_AS(wasserstein_disparity(ds2d, DisparityMethod::quantile1d),
                  DimensionError);

  GroupedDataset tiny = oracle::ds1({{"A", {0.0}}, {"B", {1.0, 2.0}}});
  CHECK_THROWS_AS(wasserstein_disparity(tiny, DisparityMethod::bures),
                  ValidationError);
  CHECK_THROWS_AS(
      wasserstein_disparity(tiny, DisparityMethod::exact_assignment),
      UnsupportedError);
}

TEST_CASE("projection loss values") {
  GroupedDataset ds = oracle::two_point();
  BarycenterModel model = fit_quantile_barycenter(ds);
  CHECK(projection_loss(model, ds) == 0.5);

  GroupedDataset same = oracle::ds1({{"A", {1, 2}}, {"B", {1, 2}}});
  CHECK(projection_loss(fit_quantile_barycenter(same), same) == 0.0);

  GroupedDataset diracs = oracle::ds1({{"A", {0}}, {"B", {2}}});
  CHECK(projection_loss(fit_quantile_barycenter(diracs), diracs) == 1.0);

  CHECK_THROWS_AS(projection_loss(model, oracle::ds1({{"A", {0.0}},
                                                      {"X", {1.0}}})),
                  LookupError);
}
