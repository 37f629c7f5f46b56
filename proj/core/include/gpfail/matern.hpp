#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gpfail {

// Anisotropic Matérn covariance
//   k(x, y) = variance * correlation(sqrt(sum_i (x_i - y_i)^2 / ranges_i^2))
// with smoothness parameter nu.
struct CovarianceSpec {
  double variance = 1.0;    // sigma^2, squared output units
  double smoothness = 2.0;  // nu, dimensionless
  std::vector<double> ranges;  // rho_i, input units per axis

  int dim() const { return static_cast<int>(ranges.size()); }

  // Log parameterization {log sigma^2, log nu, -log rho_1, ..., -log rho_d}.
  std::vector<double> to_log_params() const;
  static CovarianceSpec from_log_params(const std::vector<double>& theta);

  void validate() const;
};

// Matérn correlation at scaled distance h >= 0; equals 1 at h = 0.
double matern_correlation(double h, double smoothness);

// Covariance between two points.
double covariance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  const CovarianceSpec& spec);

// Scaled anisotropic distance sqrt(sum_i (x_i - y_i)^2 / rho_i^2).
double scaled_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const CovarianceSpec& spec);

}  // namespace gpfail
