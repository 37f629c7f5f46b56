#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "gpfail/criteria.hpp"
#include "gpfail/posterior.hpp"
#include "gpfail/sequencer.hpp"

namespace gpfail {

// Test problems.
double f_one_d(double x);
double f_one_d(const Eigen::VectorXd& x);
double f_four_branch(double x1, double x2);
double f_four_branch(const Eigen::VectorXd& x);

struct LabeledCriterion {
  std::string label;
  CriterionConfig criterion;
};

// Series-system study: estimate P{f <= 0} for the four-branch performance
// function with standard normal inputs, replicated over fresh designs and
// samples, reporting the stabilization indices n_gamma per criterion.
struct FourBranchStudySpec {
  int replications = 20;
  int m = 10000;
  int n0 = 10;
  // Points added after the initial design. Runs that never stabilize within
  // this budget are censored at it and counted in not_attained_fraction.
  int added_budget = 60;
  int reestimate_every = 10;
  EstimateMode estimate_mode = EstimateMode::REML;
  std::vector<LabeledCriterion> criteria;
  std::vector<double> gammas = {0.10, 0.03, 0.01};
  std::uint64_t base_seed = 90210;
  int lhs_trials = 10000;
  int estimate_starts = 5;

  void validate() const;
};

struct NGammaRow {
  std::string label;
  std::string params;
  double gamma = 0.0;
  double mean_n = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  double not_attained_fraction = 0.0;
};

struct FourBranchReport {
  std::vector<NGammaRow> rows;
};

std::vector<LabeledCriterion> four_branch_default_criteria();
FourBranchReport run_four_branch_study(const FourBranchStudySpec& spec);

// Synthetic-path study: each replication simulates one zero-mean Gaussian
// process path jointly over its initial design and Monte Carlo sample, sets
// the threshold so that exactly ceil(0.02 m) sample points exceed it, and
// runs every criterion with the generating covariance kept fixed. Reports
// rMSE in dB per criterion per evaluation count.
struct GpPathStudySpec {
  int d = 1;
  int paths = 200;
  int m = 500;
  int n0 = 3;
  // Total evaluations including the initial design.
  int total_budget = 30;
  std::vector<LabeledCriterion> criteria;
  bool include_reference = true;
  std::uint64_t base_seed = 31337;
  int lhs_trials = 10000;
  CovarianceSpec cov;

  static GpPathStudySpec defaults(int d);
  void validate() const;
};

struct RmseRow {
  std::string label;
  std::string params;
  int d = 0;
  int n = 0;
  double rmse_db = 0.0;
};

struct GpPathReport {
  std::vector<RmseRow> rows;
};

GpPathReport run_gp_path_study(const GpPathStudySpec& spec);

// Fixed configuration for the one-dimensional walkthrough: threshold 1,
// N(0, 0.4^2) inputs, m = 1500, four initial points, eight added points
// under the variant-1 criterion, covariance held fixed.
ExperimentConfig one_d_illustration_config();

// Re-runs `config` truncated to n_obs evaluations and returns the posterior
// summary over the Monte Carlo sample together with the criterion scores of
// every searched candidate at that state.
struct StepScores {
  int n_obs = 0;
  MCSample sample;
  PosteriorSummary summary;
  SelectionResult selection;
};

StepScores scores_at_step(const ExperimentConfig& config, int n_obs);

}  // namespace gpfail
