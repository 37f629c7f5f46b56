#include "gpfail/sequencer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gpfail/design.hpp"
#include "gpfail/errors.hpp"
#include "gpfail/kriging.hpp"
#include "gpfail/lhs.hpp"
#include "gpfail/posterior.hpp"
#include "gpfail/rng.hpp"

namespace gpfail {

namespace {

double evaluate_objective(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x) {
  const double z = f(x);
  if (!std::isfinite(z)) {
    std::ostringstream msg;
    msg << "run: objective returned a non-finite value at (";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i > 0) msg << ", ";
      msg << x(i);
    }
    msg << ")";
    throw NumericalError(msg.str());
  }
  return z;
}

void rebuild_cross_cache(Eigen::MatrixXd& k_cross, const Eigen::MatrixXd& sample,
                         const Eigen::MatrixXd& design_points,
                         const CovarianceSpec& cov) {
  const Eigen::Index m = sample.rows();
  const Eigen::Index n = design_points.rows();
  k_cross.resize(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      k_cross(j, i) = covariance(sample.row(j), design_points.row(i), cov);
    }
  }
}

void append_cross_column(Eigen::MatrixXd& k_cross, const Eigen::MatrixXd& sample,
                         const Eigen::VectorXd& x, const CovarianceSpec& cov) {
  const Eigen::Index m = sample.rows();
  const Eigen::Index n = k_cross.cols();
  k_cross.conservativeResize(m, n + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    k_cross(j, n) = covariance(sample.row(j), x.transpose(), cov);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!objective) {
    throw ConfigError("ExperimentConfig: objective is not set");
  }
  domain.validate();
  input_law.validate();
  const auto d = domain.dim();
  if (input_law.dim() != 0 && input_law.dim() != d) {
    throw ConfigError("ExperimentConfig: input_law dimension does not match domain");
  }
  if (!std::isfinite(threshold)) {
    throw ConfigError("ExperimentConfig: threshold must be finite");
  }
  if (n0 < 2) {
    throw ConfigError("ExperimentConfig: n0 must be at least 2");
  }
  if (budget < n0) {
    throw ConfigError("ExperimentConfig: budget must be at least n0");
  }
  if (m < 1) {
    throw ConfigError("ExperimentConfig: m must be at least 1");
  }
  criterion.validate(m);
  if (reestimate_every < 0) {
    throw ConfigError("ExperimentConfig: reestimate_every must be nonnegative");
  }
  cov_init.validate();
  if (cov_init.dim() != d) {
    throw ConfigError("ExperimentConfig: cov_init dimension does not match domain");
  }
  if (trend.size() == 0) {
    throw ConfigError("ExperimentConfig: trend has no basis functions");
  }
  if (static_cast<Eigen::Index>(trend.size()) > static_cast<Eigen::Index>(n0)) {
    throw ConfigError("ExperimentConfig: n0 is smaller than the trend basis");
  }
  if (reestimate_every > 0 &&
      n0 < static_cast<int>(trend.size()) + 2) {
    throw ConfigError(
        "ExperimentConfig: covariance estimation needs n0 >= trend size + 2");
  }
  if (estimate_starts < 1) {
    throw ConfigError("ExperimentConfig: estimate_starts must be at least 1");
  }
  if (lhs_trials < 1) {
    throw ConfigError("ExperimentConfig: lhs_trials must be at least 1");
  }
  if (!(nugget_rel >= 0.0) || !std::isfinite(nugget_rel)) {
    throw ConfigError("ExperimentConfig: nugget_rel must be finite and nonnegative");
  }
  if (initial_points) {
    if (initial_points->rows() != n0 || initial_points->cols() != static_cast<Eigen::Index>(d)) {
      throw ConfigError("ExperimentConfig: initial_points must be n0 x dim");
    }
  }
  if (sample) {
    if (sample->points.rows() != m || sample->points.cols() != static_cast<Eigen::Index>(d)) {
      throw ConfigError("ExperimentConfig: sample override must be m x dim");
    }
  }
}

double RunTrace::final_estimate() const {
  if (alpha_hat.size() == 0) {
    throw ConfigError("RunTrace: no recorded estimates");
  }
  return alpha_hat(alpha_hat.size() - 1);
}

RunTrace run(const ExperimentConfig& config) {
  config.validate();
  const int d = static_cast<int>(config.domain.dim());
  const int n0 = config.n0;
  const int added = config.budget - n0;

  Design design;
  design.points = config.initial_points
                      ? *config.initial_points
                      : maximin_lhs(n0, config.domain, config.lhs_trials,
                                    config.seed_design);
  design.values.resize(n0);
  for (int i = 0; i < n0; ++i) {
    design.values(i) =
        evaluate_objective(config.objective, design.points.row(i).transpose());
  }

  MCSample sample = config.sample ? *config.sample
                                  : draw_mc_sample(config.input_law, config.m,
                                                   config.seed_sample);

  RunTrace trace;
  trace.n0 = n0;
  trace.threshold = config.threshold;
  trace.points.resize(config.budget, d);
  trace.values.resize(config.budget);
  trace.points.topRows(n0) = design.points;
  trace.values.head(n0) = design.values;
  trace.alpha_hat.resize(added + 1);
  trace.alpha_plugin.resize(added + 1);
  trace.chosen_sample_indices.reserve(static_cast<std::size_t>(added));

  {
    Eigen::VectorXd sample_values(config.m);
    for (int j = 0; j < config.m; ++j) {
      sample_values(j) =
          evaluate_objective(config.objective, sample.points.row(j).transpose());
    }
    trace.alpha_m = mc_reference(sample_values, config.threshold);
  }

  std::vector<char> evaluated(static_cast<std::size_t>(config.m), 0);
  {
    const double tol = design.default_separation_tol();
    for (int j = 0; j < config.m; ++j) {
      for (int i = 0; i < n0; ++i) {
        if ((sample.points.row(j) - design.points.row(i)).norm() < tol) {
          evaluated[static_cast<std::size_t>(j)] = true;
          break;
        }
      }
    }
  }

  CovarianceSpec cov = config.cov_init;
  Eigen::MatrixXd k_cross;
  bool cache_ok = false;
  int estimate_events = 0;

  for (int a = 0; a <= added; ++a) {
    if (config.reestimate_every > 0 && a % config.reestimate_every == 0) {
      EstimateOptions opts;
      opts.estimate_smoothness = config.estimate_smoothness;
      opts.starts = config.estimate_starts;
      opts.seed = derive_seed(config.seed_estimation,
                              static_cast<std::uint64_t>(estimate_events));
      opts.nugget_rel = config.nugget_rel;
      const EstimateResult res =
          estimate_params(design, config.trend, cov, config.estimate_mode, opts);
      cov = res.spec;
      cache_ok = false;
      trace.estimates.push_back(
          EstimateEvent{n0 + a, res.spec, res.improved, res.objective});
      ++estimate_events;
    }

    const KrigingModel model =
        fit(design, config.trend, cov, config.nugget_rel);
    if (!cache_ok) {
      rebuild_cross_cache(k_cross, sample.points, design.points, cov);
      cache_ok = true;
    }
    const BatchPredictor batch(model, sample.points, &k_cross);
    const PosteriorSummary summary = summarize(batch, config.threshold);
    trace.alpha_hat(a) = alpha_posterior_mean(summary);
    trace.alpha_plugin(a) = alpha_plugin(summary);

    if (a == added) {
      break;
    }

    const SelectionResult sel = select_next(config.criterion, model, sample,
                                            summary, evaluated, &batch);
    const Eigen::VectorXd x =
        sample.points.row(sel.chosen_index).transpose();
    const double z = evaluate_objective(config.objective, x);
    design = design.with_point(x, z);
    evaluated[static_cast<std::size_t>(sel.chosen_index)] = true;
    trace.points.row(n0 + a) = x.transpose();
    trace.values(n0 + a) = z;
    trace.chosen_sample_indices.push_back(sel.chosen_index);
    if (cache_ok) {
      append_cross_column(k_cross, sample.points, x, cov);
    }
  }

  return trace;
}

std::optional<int> n_gamma(const RunTrace& trace, double gamma) {
  if (!(gamma > 0.0)) {
    throw ConfigError("n_gamma: gamma must be positive");
  }
  if (!(trace.alpha_m > 0.0)) {
    throw ConfigError("n_gamma: alpha_m must be positive");
  }
  if (trace.alpha_hat.size() == 0) {
    throw ConfigError("n_gamma: trace has no recorded estimates");
  }
  int first_ok = static_cast<int>(trace.alpha_hat.size());
  for (Eigen::Index k = trace.alpha_hat.size() - 1; k >= 0; --k) {
    const double rel = std::abs(trace.alpha_hat(k) - trace.alpha_m) / trace.alpha_m;
    if (rel >= gamma) {
      break;
    }
    first_ok = static_cast<int>(k);
  }
  if (first_ok >= static_cast<int>(trace.alpha_hat.size())) {
    return std::nullopt;
  }
  return first_ok;
}

double rmse_db(const std::vector<double>& estimates, double reference) {
  if (estimates.empty()) {
    throw ConfigError("rmse_db: empty estimate list");
  }
  if (reference == 0.0 || !std::isfinite(reference)) {
    throw ConfigError("rmse_db: reference must be finite and nonzero");
  }
  double acc = 0.0;
  for (const double e : estimates) {
    const double rel = (e - reference) / reference;
    acc += rel * rel;
  }
  acc /= static_cast<double>(estimates.size());
  if (acc == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(acc);
}

}  // namespace gpfail
