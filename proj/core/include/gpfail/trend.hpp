#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace gpfail {

// Linear trend basis h_1..h_l. Default is the single constant function 1,
// i.e. ordinary kriging with unknown constant mean.
struct TrendSpec {
  std::vector<std::function<double(const Eigen::VectorXd&)>> basis;

  static TrendSpec constant();
  // Constant plus the d coordinate functions.
  static TrendSpec linear(int dim);

  int size() const { return static_cast<int>(basis.size()); }

  // l-vector h(x).
  Eigen::VectorXd at(const Eigen::VectorXd& x) const;

  // l x n matrix with columns h(x_i) for the rows x_i of points.
  Eigen::MatrixXd at_points(const Eigen::MatrixXd& points) const;
};

}  // namespace gpfail
