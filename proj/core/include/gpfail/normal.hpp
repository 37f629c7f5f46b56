#pragma once

namespace gpfail {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF, accurate in both tails.
double normal_cdf(double x);

// Inverse of normal_cdf on (0, 1). Relative accuracy about 1e-15
// (Wichura's PPND16 rational approximation).
double normal_quantile(double p);

}  // namespace gpfail
