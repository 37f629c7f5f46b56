#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "gpfail/matern.hpp"
#include "gpfail/rng.hpp"
#include "gpfail/simulate.hpp"

using namespace gpfail;

namespace {

Eigen::MatrixXd grid_1d(int m) {
  Eigen::MatrixXd pts(m, 1);
  for (int i = 0; i < m; ++i) {
    pts(i, 0) = static_cast<double>(i) / (m - 1);
  }
  return pts;
}

}  // namespace

TEST_CASE("simulate_paths is deterministic and shaped correctly") {
  CovarianceSpec cov;
  cov.variance = 1.3;
  cov.smoothness = 1.5;
  cov.ranges = {0.4};
  const Eigen::MatrixXd pts = grid_1d(17);
  const GPPathSet a = simulate_paths(pts, cov, 5, 99);
  const GPPathSet b = simulate_paths(pts, cov, 5, 99);
  CHECK(a.paths.rows() == 5);
  CHECK(a.paths.cols() == 17);
  CHECK(a.paths == b.paths);
  CHECK(a.seed == 99);

  const GPPathSet c = simulate_paths(pts, cov, 5, 100);
  CHECK(a.paths != c.paths);
}

TEST_CASE("simulated paths have the requested covariance structure") {
  CovarianceSpec cov;
  cov.variance = 2.0;
  cov.smoothness = 2.5;
  cov.ranges = {0.5};
  Eigen::MatrixXd pts(3, 1);
  pts << 0.1, 0.5, 0.9;
  const int count = 60000;
  const GPPathSet set = simulate_paths(pts, cov, count, 7);

  for (int a = 0; a < 3; ++a) {
    const double mean = set.paths.col(a).mean();
    // SE of the mean is sqrt(var / count)
    CHECK(std::abs(mean) < 4.0 * std::sqrt(cov.variance / count));
    for (int b = a; b < 3; ++b) {
      const double want = covariance(pts.row(a).transpose(),
                                     pts.row(b).transpose(), cov);
      const double got =
          (set.paths.col(a).array() * set.paths.col(b).array()).mean();
      // var(XY) <= E[X^2 Y^2] <= 3 var^2 for joint Gaussians
      const double se = std::sqrt(3.0 * cov.variance * cov.variance / count);
      CHECK(std::abs(got - want) < 4.0 * se);
    }
  }
}

TEST_CASE("simulate_paths handles rank-deficient covariance matrices") {
  // smooth kernel on a dense grid: the covariance matrix is numerically
  // singular but paths must still come out finite with the right marginals
  CovarianceSpec cov;
  cov.variance = 1.0;
  cov.smoothness = 2.5;
  cov.ranges = {2.0};
  const Eigen::MatrixXd pts = grid_1d(120);
  const GPPathSet set = simulate_paths(pts, cov, 200, 11);
  CHECK(set.paths.allFinite());
  // marginal variance across paths at a few grid points
  for (int j : {0, 60, 119}) {
    const double v = set.paths.col(j).squaredNorm() / 200.0;
    CHECK(v > 0.5);
    CHECK(v < 1.6);
  }
  // smoothness: neighboring grid values nearly equal along each path
  const double gap = (set.paths.col(60) - set.paths.col(61)).cwiseAbs().maxCoeff();
  CHECK(gap < 0.05);
}
