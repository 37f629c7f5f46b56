#include "gpfail/simulate.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gpfail/errors.hpp"
#include "gpfail/rng.hpp"

namespace gpfail {

GPPathSet simulate_paths(const Eigen::MatrixXd& points,
                         const CovarianceSpec& cov, int count,
                         std::uint64_t seed) {
  cov.validate();
  const Eigen::Index m = points.rows();
  if (m == 0) {
    throw ConfigError("simulate_paths: empty point set");
  }
  if (points.cols() != static_cast<Eigen::Index>(cov.dim())) {
    throw ConfigError("simulate_paths: point dimension does not match ranges");
  }
  if (count < 1) {
    throw ConfigError("simulate_paths: count must be at least 1");
  }

  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = cov.variance;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = covariance(points.row(i), points.row(j), cov);
      k(i, j) = v;
      k(j, i) = v;
    }
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("simulate_paths: covariance factorization failed");
  }
  // Small negative pivots are rounding artifacts of a positive semidefinite
  // matrix; treat them as exact zeros.
  const Eigen::VectorXd d_sqrt =
      ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();

  GPPathSet out;
  out.points = points;
  out.seed = seed;
  out.paths.resize(count, m);
  Rng rng(seed);
  Eigen::VectorXd xi(m);
  for (int r = 0; r < count; ++r) {
    for (Eigen::Index i = 0; i < m; ++i) {
      xi(i) = rng.normal();
    }
    Eigen::VectorXd y = ldlt.matrixL() * d_sqrt.cwiseProduct(xi).eval();
    y = ldlt.transpositionsP().transpose() * y;
    out.paths.row(r) = y.transpose();
  }
  return out;
}

}  // namespace gpfail
