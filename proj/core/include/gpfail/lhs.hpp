#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "gpfail/mc_sample.hpp"

namespace gpfail {

// Latin hypercube design of n points in a box, chosen as the best of
// `trials` random hypercubes under the maximin (largest smallest pairwise
// distance) objective. Deterministic in (n, box, trials, seed).
Eigen::MatrixXd maximin_lhs(int n, const Box& box, int trials,
                            std::uint64_t seed);

}  // namespace gpfail
