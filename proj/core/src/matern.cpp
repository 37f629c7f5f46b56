#include "gpfail/matern.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "gpfail/errors.hpp"

namespace gpfail {

std::vector<double> CovarianceSpec::to_log_params() const {
  std::vector<double> theta;
  theta.reserve(2 + ranges.size());
  theta.push_back(std::log(variance));
  theta.push_back(std::log(smoothness));
  for (double rho : ranges) theta.push_back(-std::log(rho));
  return theta;
}

CovarianceSpec CovarianceSpec::from_log_params(
    const std::vector<double>& theta) {
  if (theta.size() < 3) {
    throw ConfigError("CovarianceSpec: log parameter vector needs at least 3 entries");
  }
  CovarianceSpec spec;
  spec.variance = std::exp(theta[0]);
  spec.smoothness = std::exp(theta[1]);
  spec.ranges.resize(theta.size() - 2);
  for (std::size_t i = 2; i < theta.size(); ++i) {
    spec.ranges[i - 2] = std::exp(-theta[i]);
  }
  return spec;
}

void CovarianceSpec::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("CovarianceSpec: variance must be positive and finite");
  }
  if (!(smoothness > 0.0) || !std::isfinite(smoothness)) {
    throw ConfigError("CovarianceSpec: smoothness must be positive and finite");
  }
  if (ranges.empty()) {
    throw ConfigError("CovarianceSpec: at least one range required");
  }
  for (double rho : ranges) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw ConfigError("CovarianceSpec: ranges must be positive and finite");
    }
  }
}

double matern_correlation(double h, double smoothness) {
  if (!std::isfinite(h) || !std::isfinite(smoothness)) {
    throw ConfigError("matern_correlation: non-finite input");
  }
  if (h < 0.0 || smoothness <= 0.0) {
    throw ConfigError("matern_correlation: need h >= 0 and smoothness > 0");
  }
  if (h == 0.0) return 1.0;
  const double nu = smoothness;
  const double t = 2.0 * std::sqrt(nu) * h;
  // Below this the correlation is 1 to double precision; above ~700 the
  // exp(-t) factor in K_nu underflows.
  if (t < 1e-100) return 1.0;
  if (t > 700.0) return 0.0;
  const double log_coeff = -(nu - 1.0) * std::log(2.0) - std::lgamma(nu);
  const double value = std::exp(log_coeff + nu * std::log(t)) *
                       boost::math::cyl_bessel_k(nu, t);
  if (value < 0.0) return 0.0;
  if (value > 1.0) return 1.0;
  return value;
}

double scaled_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const CovarianceSpec& spec) {
  if (x.size() != y.size() || x.size() != spec.dim()) {
    throw ConfigError("scaled_distance: dimension mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double d = (x[i] - y[i]) / spec.ranges[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double covariance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  const CovarianceSpec& spec) {
  const double h = scaled_distance(x, y, spec);
  if (h == 0.0) return spec.variance;
  return spec.variance * matern_correlation(h, spec.smoothness);
}

}  // namespace gpfail
