#pragma once

#include <cstdint>

#include "gpfail/design.hpp"
#include "gpfail/matern.hpp"
#include "gpfail/trend.hpp"

namespace gpfail {

enum class EstimateMode { ML, REML };

struct EstimateOptions {
  bool estimate_smoothness = false;  // nu is held fixed by default
  int starts = 5;                    // multi-start count, first start = init
  int max_iterations = 250;          // simplex iterations per start
  std::uint64_t seed = 0x5EEDBA5EULL;  // perturbation stream for starts 2..
  double nugget_rel = 1e-8;
};

struct EstimateResult {
  CovarianceSpec spec;
  bool improved = false;   // false: all starts failed to beat init
  double objective = 0.0;  // log-likelihood (restricted when REML) at spec
  double objective_init = 0.0;
};

// Gaussian (restricted) log-likelihood of the design under the given
// covariance, with the trend coefficients profiled out by generalized
// least squares. REML is the likelihood of the trend-orthogonal contrasts.
double log_likelihood(const Design& design, const TrendSpec& trend,
                      const CovarianceSpec& spec, EstimateMode mode,
                      double nugget_rel = 1e-8);

// Maximizes the (restricted) likelihood over the log-parameterization by
// derivative-free simplex search with fixed multi-starts; the process
// variance is concentrated out analytically at every step. Range
// parameters are kept within [1e-3, 10] times the per-axis spread of the
// design. Deterministic given the options seed; the result is never worse
// in objective than init.
EstimateResult estimate_params(const Design& design, const TrendSpec& trend,
                               const CovarianceSpec& init, EstimateMode mode,
                               const EstimateOptions& options = {});

}  // namespace gpfail
