#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fairpost/dataset.hpp"
#include "fairpost/linalg.hpp"

namespace fairpost {

struct GroupSpec {
  std::string label;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::Index count = 0;
};

struct SyntheticSpec {
  std::vector<GroupSpec> groups;
  std::uint64_t seed = 0;
};

// Deterministic standard-normal stream. The algorithm is fixed so runs are
// reproducible across platforms:
//   engine: std::mt19937_64 seeded directly with the spec seed
//   uniform: u = (x >> 11) * 2^-53 in [0, 1)
//   normals: Box-Muller, r = sqrt(-2 ln(1 - u1)), angle = 2 pi u2,
//            yields r cos(angle) then the cached r sin(angle)
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));  // ln(1-u1), u1 < 1
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Draws each group from N(mean, cov) via y = mean + S x with S = sqrtm_psd(cov)
// and x a vector of stream normals. One stream for the whole spec; groups are
// consumed in listed order, so output depends only on (spec, seed).
inline GroupedDataset synth_gaussian(const SyntheticSpec& spec) {
  if (spec.groups.size() < 2)
    throw ValidationError("synthetic spec needs at least two groups");
  std::set<std::string> seen;
  const Eigen::Index k = spec.groups[0].mean.size();
  for (const auto& g : spec.groups) {
    if (!seen.insert(g.label).second)
      throw ValidationError("duplicate group label '" + g.label + "'");
    if (g.count < 1)
      throw ValidationError("group '" + g.label + "' has count " +
                            std::to_string(g.count));
    if (g.mean.size() != k)
      throw DimensionError("group '" + g.label + "' mean has dimension " +
                           std::to_string(g.mean.size()) + ", expected " +
                           std::to_string(k));
    if (g.cov.rows() != k || g.cov.cols() != k)
      throw DimensionError("group '" + g.label + "' covariance is not " +
                           std::to_string(k) + "x" + std::to_string(k));
  }
  if (k == 0) throw DimensionError("outcome dimension is zero");

  NormalStream stream(spec.seed);
  std::map<std::string, Eigen::MatrixXd> groups;
  for (const auto& g : spec.groups) {
    Eigen::MatrixXd s = sqrtm_psd(g.cov);  // validates symmetry and PSD
    Eigen::MatrixXd mat(g.count, k);
    Eigen::VectorXd x(k);
    for (Eigen::Index i = 0; i < g.count; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) x(j) = stream.normal();
      mat.row(i) = (g.mean + s * x).transpose();
    }
    groups.emplace(g.label, std::move(mat));
  }
  return GroupedDataset::from_groups(std::move(groups));
}

}  // namespace fairpost
