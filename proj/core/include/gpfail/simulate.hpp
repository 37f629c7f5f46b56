#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "gpfail/matern.hpp"

namespace gpfail {

// Unconditional zero-mean sample paths of a Gaussian process restricted to a
// fixed point set. Row r of `paths` holds path r evaluated at every row of
// `points`.
struct GPPathSet {
  Eigen::MatrixXd points;
  Eigen::MatrixXd paths;
  std::uint64_t seed = 0;
};

// Draws `count` joint samples from N(0, K) where K is the covariance matrix
// of `cov` over `points`. Uses a pivoted LDL^T factor square root, so rank
// deficient covariance matrices (smooth kernels on dense point sets) are
// handled without jitter. Deterministic in (points, cov, count, seed).
GPPathSet simulate_paths(const Eigen::MatrixXd& points,
                         const CovarianceSpec& cov, int count,
                         std::uint64_t seed);

}  // namespace gpfail
