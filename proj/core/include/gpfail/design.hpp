#pragma once

#include <Eigen/Dense>

namespace gpfail {

// Evaluation results (x_i, z_i = f(x_i)), one point per row.
struct Design {
  Eigen::MatrixXd points;  // n x d
  Eigen::VectorXd values;  // n

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  // Rejects shape mismatches, non-finite entries and near-duplicate points
  // (pairwise distance below separation_tol).
  void validate(double separation_tol) const;

  // Default tolerance: 1e-9 times the diameter of the point cloud.
  double default_separation_tol() const;

  Design with_point(const Eigen::VectorXd& x, double z) const;
};

}  // namespace gpfail
