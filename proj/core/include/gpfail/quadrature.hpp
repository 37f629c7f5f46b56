#pragma once

#include <Eigen/Dense>

namespace gpfail {

// Gauss-Hermite rule normalized for integration against the standard
// normal: E[g(Z)] ~= sum_q weights[q] * g(nodes[q] * sqrt(2)), i.e.
// weights are w'_q = w_q / sqrt(pi) and sum to 1.
struct QuadratureRule {
  Eigen::VectorXd nodes;    // u_q, physicists' convention
  Eigen::VectorXd weights;  // w'_q

  int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes and weights via eigen-decomposition of the Jacobi matrix,
// symmetrized so that odd moments vanish identically. 1 <= Q <= 64.
QuadratureRule gauss_hermite(int Q);

}  // namespace gpfail
