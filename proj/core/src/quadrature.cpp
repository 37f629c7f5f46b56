#include "gpfail/quadrature.hpp"

#include <cmath>

#include "gpfail/errors.hpp"

namespace gpfail {

QuadratureRule gauss_hermite(int Q) {
  if (Q < 1 || Q > 64) {
    throw ConfigError("gauss_hermite: Q must lie in [1, 64]");
  }
  QuadratureRule rule;
  if (Q == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Ones(1);
    return rule;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Q, Q);
  for (int i = 1; i < Q; ++i) {
    const double b = std::sqrt(0.5 * i);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) {
    throw NumericalError("gauss_hermite: Jacobi matrix eigendecomposition failed");
  }
  rule.nodes = es.eigenvalues();
  rule.weights.resize(Q);
  for (int q = 0; q < Q; ++q) {
    const double v0 = es.eigenvectors()(0, q);
    rule.weights[q] = v0 * v0;
  }
  // The rule is symmetric; average the mirrored pairs so that the odd
  // moments cancel exactly instead of to rounding.
  for (int q = 0; q < Q / 2; ++q) {
    const int r = Q - 1 - q;
    const double u = 0.5 * (rule.nodes[r] - rule.nodes[q]);
    rule.nodes[q] = -u;
    rule.nodes[r] = u;
    const double w = 0.5 * (rule.weights[q] + rule.weights[r]);
    rule.weights[q] = w;
    rule.weights[r] = w;
  }
  if (Q % 2 == 1) rule.nodes[Q / 2] = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace gpfail
