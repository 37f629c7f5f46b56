#include "gpfail/posterior.hpp"

#include <cmath>

#include "gpfail/errors.hpp"
#include "gpfail/normal.hpp"

namespace gpfail {

double excursion_probability(double mean, double sd, double threshold) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || !std::isfinite(threshold)) {
    throw ConfigError("excursion_probability: non-finite input");
  }
  if (sd < 0.0) throw ConfigError("excursion_probability: negative sd");
  const double delta = mean - threshold;
  if (sd == 0.0) {
    if (delta > 0.0) return 1.0;
    if (delta < 0.0) return 0.0;
    return 0.5;
  }
  const double t = delta / sd;
  if (t > 8.3) return 1.0;
  if (t < -8.3) return 0.0;
  return normal_cdf(t);
}

namespace {

PosteriorSummary from_mean_sd(Eigen::VectorXd mean, Eigen::VectorXd sd,
                              double threshold) {
  PosteriorSummary s;
  const int m = static_cast<int>(mean.size());
  s.mean = std::move(mean);
  s.sd = std::move(sd);
  s.threshold = threshold;
  s.p.resize(m);
  s.tau.resize(m);
  s.nu.resize(m);
  for (int j = 0; j < m; ++j) {
    const double p = excursion_probability(s.mean[j], s.sd[j], threshold);
    s.p[j] = p;
    s.tau[j] = std::min(p, 1.0 - p);
    s.nu[j] = p * (1.0 - p);
  }
  return s;
}

}  // namespace

PosteriorSummary summarize(const KrigingModel& model, const MCSample& sample,
                           double threshold) {
  BatchPredictor batch(model, sample.points);
  return summarize(batch, threshold);
}

PosteriorSummary summarize(const BatchPredictor& batch, double threshold) {
  return from_mean_sd(batch.mean(), batch.sd(), threshold);
}

double alpha_posterior_mean(const PosteriorSummary& summary) {
  return summary.p.mean();
}

double alpha_plugin(const PosteriorSummary& summary) {
  const int m = summary.size();
  double count = 0.0;
  for (int j = 0; j < m; ++j) {
    if (summary.mean[j] > summary.threshold) count += 1.0;
  }
  return count / m;
}

double mc_reference(const Eigen::VectorXd& values, double threshold) {
  double count = 0.0;
  for (int j = 0; j < values.size(); ++j) {
    if (values[j] > threshold) count += 1.0;
  }
  return count / static_cast<double>(values.size());
}

}  // namespace gpfail
