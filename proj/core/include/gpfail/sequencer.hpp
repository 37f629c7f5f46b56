#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gpfail/criteria.hpp"
#include "gpfail/estimate.hpp"
#include "gpfail/matern.hpp"
#include "gpfail/mc_sample.hpp"
#include "gpfail/trend.hpp"

namespace gpfail {

// Full description of one sequential estimation run: initial design,
// Monte Carlo sample, evaluation budget, selection criterion and
// hyperparameter handling.
struct ExperimentConfig {
  std::function<double(const Eigen::VectorXd&)> objective;
  Box domain;
  InputLaw input_law;
  double threshold = 0.0;
  // Initial design size and total budget, counted in objective evaluations.
  int n0 = 0;
  int budget = 0;
  // Monte Carlo sample size.
  int m = 0;
  CriterionConfig criterion;
  // 0 keeps cov_init fixed for the whole run. k >= 1 estimates the
  // covariance on the initial design and re-estimates after every k added
  // points, warm starting from the previous fit.
  int reestimate_every = 0;
  EstimateMode estimate_mode = EstimateMode::REML;
  bool estimate_smoothness = false;
  int estimate_starts = 5;
  TrendSpec trend = TrendSpec::constant();
  CovarianceSpec cov_init;
  std::uint64_t seed_design = 1;
  std::uint64_t seed_sample = 2;
  std::uint64_t seed_estimation = 3;
  int lhs_trials = 10000;
  double nugget_rel = 1e-8;
  // Overrides for studies that prepare their own design or sample. When
  // initial_points is set its row count must equal n0; the objective is
  // still evaluated at those points. When sample is set it replaces the
  // draw from input_law and must have m rows.
  std::optional<Eigen::MatrixXd> initial_points;
  std::optional<MCSample> sample;

  void validate() const;
};

struct EstimateEvent {
  int n_obs = 0;
  CovarianceSpec spec;
  bool improved = false;
  double objective = 0.0;
};

// Everything recorded during a run. Estimates are recorded once after the
// initial design (index 0) and once after each added point, so the alpha
// vectors have budget - n0 + 1 entries.
struct RunTrace {
  Eigen::MatrixXd points;
  Eigen::VectorXd values;
  int n0 = 0;
  double threshold = 0.0;
  Eigen::VectorXd alpha_hat;
  Eigen::VectorXd alpha_plugin;
  // Monte Carlo reference computed from the true objective on the sample.
  double alpha_m = 0.0;
  std::vector<EstimateEvent> estimates;
  std::vector<Eigen::Index> chosen_sample_indices;

  double final_estimate() const;
};

RunTrace run(const ExperimentConfig& config);

// Smallest number of added points after which every later recorded relative
// error |alpha_hat - alpha_m| / alpha_m stays below gamma. Empty when the
// final recorded error still violates gamma.
std::optional<int> n_gamma(const RunTrace& trace, double gamma);

// 10 log10 of the mean squared relative error of the estimates against the
// reference. Returns -infinity when every estimate equals the reference
// exactly.
double rmse_db(const std::vector<double>& estimates, double reference);

}  // namespace gpfail
