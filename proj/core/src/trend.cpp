#include "gpfail/trend.hpp"

namespace gpfail {

TrendSpec TrendSpec::constant() {
  TrendSpec t;
  t.basis.push_back([](const Eigen::VectorXd&) { return 1.0; });
  return t;
}

TrendSpec TrendSpec::linear(int dim) {
  TrendSpec t = constant();
  for (int i = 0; i < dim; ++i) {
    t.basis.push_back([i](const Eigen::VectorXd& x) { return x[i]; });
  }
  return t;
}

Eigen::VectorXd TrendSpec::at(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h(size());
  for (int a = 0; a < size(); ++a) h[a] = basis[a](x);
  return h;
}

Eigen::MatrixXd TrendSpec::at_points(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd H(size(), points.rows());
  for (int i = 0; i < points.rows(); ++i) {
    H.col(i) = at(points.row(i).transpose());
  }
  return H;
}

}  // namespace gpfail
