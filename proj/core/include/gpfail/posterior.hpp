#pragma once

#include <Eigen/Dense>

#include "gpfail/kriging.hpp"
#include "gpfail/mc_sample.hpp"

namespace gpfail {

// Pointwise posterior state over the Monte Carlo sample: predictive
// mean/sd, excursion probability p, misclassification probability
// tau = min(p, 1-p) and nu = p(1-p).
struct PosteriorSummary {
  Eigen::VectorXd mean, sd, p, tau, nu;
  double threshold = 0.0;

  int size() const { return static_cast<int>(p.size()); }
};

// P{f(x) > threshold | model} for a Gaussian predictive law. For sd = 0
// this degenerates to the indicator of mean > threshold, with 1/2 at
// exact equality. Beyond 8.3 predictive standard deviations the result
// is snapped to exactly 0 or 1.
double excursion_probability(double mean, double sd, double threshold);

PosteriorSummary summarize(const KrigingModel& model, const MCSample& sample,
                           double threshold);

// Same, reusing an existing batch of predictions over the sample points.
PosteriorSummary summarize(const BatchPredictor& batch, double threshold);

// (1/m) sum_j p_j.
double alpha_posterior_mean(const PosteriorSummary& summary);

// (1/m) sum_j 1{mean_j > threshold}.
double alpha_plugin(const PosteriorSummary& summary);

// (1/m) sum_j 1{values_j > threshold}.
double mc_reference(const Eigen::VectorXd& values, double threshold);

}  // namespace gpfail
