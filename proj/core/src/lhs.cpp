#include "gpfail/lhs.hpp"

#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "gpfail/errors.hpp"
#include "gpfail/rng.hpp"

namespace gpfail {

namespace {

double min_pairwise_sq(const Eigen::MatrixXd& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j) {
      best = std::min(best, (pts.row(i) - pts.row(j)).squaredNorm());
    }
  }
  return best;
}

}  // namespace

Eigen::MatrixXd maximin_lhs(int n, const Box& box, int trials,
                            std::uint64_t seed) {
  box.validate();
  if (n < 1) {
    throw ConfigError("maximin_lhs: n must be at least 1");
  }
  if (trials < 1) {
    throw ConfigError("maximin_lhs: trials must be at least 1");
  }
  const int d = static_cast<int>(box.dim());
  Rng rng(seed);

  Eigen::MatrixXd best(n, d);
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<int> perm(static_cast<std::size_t>(n));
  Eigen::MatrixXd cand(n, d);
  for (int t = 0; t < trials; ++t) {
    for (int axis = 0; axis < d; ++axis) {
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(j)]);
      }
      const double w = box.width(axis) / n;
      for (int i = 0; i < n; ++i) {
        cand(i, axis) = box.lo(axis) +
                        (perm[static_cast<std::size_t>(i)] + rng.uniform01()) * w;
      }
    }
    const double score = (n == 1) ? 0.0 : min_pairwise_sq(cand);
    if (t == 0 || score > best_score) {
      best_score = score;
      best = cand;
    }
  }
  return best;
}

}  // namespace gpfail
