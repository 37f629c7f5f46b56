#include "gpfail/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gpfail/errors.hpp"
#include "gpfail/normal.hpp"

namespace gpfail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidates whose predictive variance is this small (relative to the
// process variance) cannot be augmented on.
constexpr double kDegenerateVarRel = 1e-12;

std::vector<int> all_indices(int m) {
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<char> evaluated_from_coordinates(const KrigingModel& model,
                                             const MCSample& sample) {
  const double tol = model.design().default_separation_tol();
  std::vector<char> evaluated(sample.size(), 0);
  for (int j = 0; j < sample.size(); ++j) {
    for (int i = 0; i < model.n(); ++i) {
      if ((sample.points.row(j) - model.design().points.row(i)).norm() <=
          tol) {
        evaluated[j] = 1;
        break;
      }
    }
  }
  return evaluated;
}

}  // namespace

void CriterionConfig::validate(int sample_size) const {
  switch (kind) {
    case Kind::Sur:
      if (variant < 1 || variant > 4) {
        throw ConfigError("criterion: sur variant must be 1..4");
      }
      if (q_nodes < 1 || q_nodes > 64) {
        throw ConfigError("criterion: sur quadrature size must lie in [1, 64]");
      }
      break;
    case Kind::Timse:
      if (!(sigma_eps_sq >= 0.0)) {
        throw ConfigError("criterion: timse sigma_eps_sq must be >= 0");
      }
      break;
    case Kind::Rb:
      if (!(kappa > 0.0)) throw ConfigError("criterion: rb kappa must be > 0");
      if (delta != 1 && delta != 2) {
        throw ConfigError("criterion: rb delta must be 1 or 2");
      }
      break;
    case Kind::Ech:
    case Kind::Maximin:
      break;
  }
  if (m0 < 0) throw ConfigError("criterion: m0 must be >= 0");
  if (m0 > sample_size && sample_size > 0) {
    throw ConfigError("criterion: m0 exceeds the sample size");
  }
}

std::string CriterionConfig::describe() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::Sur:
      s << "sur" << variant << " q=" << q_nodes << " m0=" << (m0 > 0 ? std::to_string(m0) : "all");
      break;
    case Kind::Timse:
      s << "timse sigma_eps_sq=" << sigma_eps_sq
        << " m0=" << (m0 > 0 ? std::to_string(m0) : "all");
      break;
    case Kind::Rb:
      s << "rb delta=" << delta << " kappa=" << kappa;
      break;
    case Kind::Ech:
      s << "ech";
      break;
    case Kind::Maximin:
      s << "maximin";
      break;
  }
  return s.str();
}

double g_closed(double p, double kappa, int delta) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("g_closed: p must lie in (0, 1)");
  }
  if (!(kappa > 0.0)) throw ConfigError("g_closed: kappa must be > 0");
  const double t = normal_quantile(1.0 - p);
  const double tp = t + kappa;
  const double tm = t - kappa;
  double g;
  if (delta == 1) {
    g = kappa * (normal_cdf(tp) - normal_cdf(tm)) -
        t * (2.0 * normal_cdf(t) - normal_cdf(tp) - normal_cdf(tm)) -
        (2.0 * normal_pdf(t) - normal_pdf(tp) - normal_pdf(tm));
  } else if (delta == 2) {
    g = (kappa * kappa - 1.0 - t * t) * (normal_cdf(tp) - normal_cdf(tm)) -
        2.0 * t * (normal_pdf(tp) - normal_pdf(tm)) + tp * normal_pdf(tp) -
        tm * normal_pdf(tm);
  } else {
    throw ConfigError("g_closed: delta must be 1 or 2");
  }
  return g > 0.0 ? g : 0.0;
}

Eigen::VectorXd j_rb(const PosteriorSummary& summary, double kappa,
                     int delta) {
  const int m = summary.size();
  Eigen::VectorXd scores(m);
  for (int j = 0; j < m; ++j) {
    const double p = summary.p[j];
    const double sd = summary.sd[j];
    if (sd == 0.0 || p <= 0.0 || p >= 1.0) {
      scores[j] = 0.0;
      continue;
    }
    const double sig = (delta == 1) ? sd : sd * sd;
    scores[j] = sig * g_closed(p, kappa, delta);
  }
  return scores;
}

Eigen::VectorXd j_ech(const PosteriorSummary& summary) { return summary.tau; }

Eigen::VectorXd j_timse(const BatchPredictor& batch,
                        const PosteriorSummary& summary, double sigma_eps_sq,
                        const std::vector<int>& candidates,
                        const std::vector<int>& integrand) {
  if (candidates.empty()) throw ConfigError("j_timse: no candidates");
  const std::vector<int>& I = integrand.empty() ? candidates : integrand;
  const double var_floor =
      kDegenerateVarRel * batch.model().cov().variance;

  // Threshold-centered weights, frozen at the current model state.
  Eigen::VectorXd w(I.size());
  for (std::size_t a = 0; a < I.size(); ++a) {
    const int j = I[a];
    const double s2 = sigma_eps_sq + batch.variance()[j];
    const double s = std::sqrt(s2);
    if (s == 0.0) {
      w[a] = 0.0;  // degenerate weight; the variance integrand is 0 anyway
      continue;
    }
    w[a] = normal_pdf((summary.mean[j] - summary.threshold) / s) / s;
  }

  const Eigen::MatrixXd cross =
      batch.posterior_cov(I, candidates);  // |I| x |C|
  Eigen::VectorXd scores(candidates.size());
  for (std::size_t b = 0; b < candidates.size(); ++b) {
    const int k = candidates[b];
    const double var_k = batch.variance()[k];
    if (var_k <= var_floor) {
      scores[b] = kInf;
      continue;
    }
    double acc = 0.0;
    for (std::size_t a = 0; a < I.size(); ++a) {
      const double c = cross(a, b);
      const double v = batch.variance()[I[a]] - c * c / var_k;
      if (v > 0.0) acc += v * w[a];
    }
    scores[b] = acc / static_cast<double>(I.size());
  }
  return scores;
}

Eigen::VectorXd j_timse(const KrigingModel& model, const MCSample& sample,
                        const PosteriorSummary& summary, double sigma_eps_sq,
                        const std::vector<int>& candidates,
                        const std::vector<int>& integrand) {
  BatchPredictor batch(model, sample.points);
  return j_timse(batch, summary, sigma_eps_sq, candidates, integrand);
}

Eigen::VectorXd j_sur(const BatchPredictor& batch,
                      const PosteriorSummary& summary, int variant,
                      const QuadratureRule& rule,
                      const std::vector<int>& candidates,
                      const std::vector<int>& integrand) {
  if (variant < 1 || variant > 4) {
    throw ConfigError("j_sur: variant must be 1..4");
  }
  if (candidates.empty()) throw ConfigError("j_sur: no candidates");
  const std::vector<int>& I = integrand.empty() ? candidates : integrand;
  const bool sqrt_integrand = (variant == 1 || variant == 2);
  const bool use_nu = (variant == 2 || variant == 4);
  const double u = summary.threshold;
  const int Q = rule.size();
  const double var_floor = kDegenerateVarRel * batch.model().cov().variance;

  // Sample points the current model already classifies contribute nothing
  // measurable after one more observation; skip them.
  std::vector<int> active;
  active.reserve(I.size());
  for (int j : I) {
    if (summary.tau[j] > 0.0) active.push_back(j);
  }

  Eigen::MatrixXd cross;  // |active| x |C|
  if (!active.empty()) cross = batch.posterior_cov(active, candidates);

  const double inv_size = 1.0 / static_cast<double>(I.size());
  Eigen::VectorXd scores(candidates.size());
  Eigen::VectorXd node_acc(Q);
  for (std::size_t b = 0; b < candidates.size(); ++b) {
    const int k = candidates[b];
    const double var_k = batch.variance()[k];
    if (var_k <= var_floor) {
      scores[b] = kInf;
      continue;
    }
    const double mean_k = batch.mean()[k];
    const double sd_k = batch.sd()[k];
    node_acc.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) {
      const int j = active[a];
      const double c = cross(a, b);
      const double gain = c / var_k;
      double aug_var = batch.variance()[j] - c * c / var_k;
      if (aug_var < 0.0) aug_var = 0.0;
      const double aug_sd = std::sqrt(aug_var);
      const double base = batch.mean()[j];
      for (int q = 0; q < Q; ++q) {
        const double z = mean_k + sd_k * rule.nodes[q] * std::numbers::sqrt2;
        const double p = excursion_probability(base + gain * (z - mean_k),
                                               aug_sd, u);
        const double v = use_nu ? p * (1.0 - p) : std::min(p, 1.0 - p);
        node_acc[q] += sqrt_integrand ? std::sqrt(v) : v;
      }
    }
    double score = 0.0;
    for (int q = 0; q < Q; ++q) {
      const double avg = node_acc[q] * inv_size;
      score += rule.weights[q] * (sqrt_integrand ? avg * avg : avg);
    }
    scores[b] = score;
  }
  return scores;
}

Eigen::VectorXd j_sur(const KrigingModel& model, const MCSample& sample,
                      const PosteriorSummary& summary, int variant,
                      const QuadratureRule& rule,
                      const std::vector<int>& candidates,
                      const std::vector<int>& integrand) {
  BatchPredictor batch(model, sample.points);
  return j_sur(batch, summary, variant, rule, candidates, integrand);
}

std::vector<int> prune(const PosteriorSummary& summary, int m0) {
  const int m = summary.size();
  std::vector<int> idx = all_indices(m);
  if (m0 <= 0 || m0 >= m) return idx;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return summary.tau[a] > summary.tau[b];
  });
  idx.resize(m0);
  std::sort(idx.begin(), idx.end());
  return idx;
}

int maximin_next(const Eigen::MatrixXd& design_points, const MCSample& sample,
                 const std::vector<char>& evaluated) {
  if (!evaluated.empty() &&
      evaluated.size() != static_cast<std::size_t>(sample.size())) {
    throw ConfigError("maximin_next: evaluated flag vector has wrong length");
  }
  int best = -1;
  double best_dist = -1.0;
  for (int j = 0; j < sample.size(); ++j) {
    if (!evaluated.empty() && evaluated[j]) continue;
    double dmin = kInf;
    for (int i = 0; i < design_points.rows(); ++i) {
      const double d = (sample.points.row(j) - design_points.row(i)).norm();
      if (d < dmin) dmin = d;
    }
    if (dmin > best_dist) {
      best_dist = dmin;
      best = j;
    }
  }
  if (best < 0) throw ConfigError("maximin_next: all sample points evaluated");
  return best;
}

SelectionResult select_next(const CriterionConfig& config,
                            const KrigingModel& model, const MCSample& sample,
                            const PosteriorSummary& summary,
                            const std::vector<char>& evaluated,
                            const BatchPredictor* batch) {
  config.validate(sample.size());
  const std::vector<char> flags =
      evaluated.empty() ? evaluated_from_coordinates(model, sample)
                        : evaluated;

  if (config.kind == CriterionConfig::Kind::Maximin) {
    SelectionResult result;
    result.chosen_index =
        maximin_next(model.design().points, sample, flags);
    for (int j = 0; j < sample.size(); ++j) {
      if (!flags[j]) result.searched_indices.push_back(j);
    }
    result.scores.resize(result.searched_indices.size());
    for (std::size_t a = 0; a < result.searched_indices.size(); ++a) {
      const int j = result.searched_indices[a];
      double dmin = kInf;
      for (int i = 0; i < model.n(); ++i) {
        dmin = std::min(dmin, (sample.points.row(j) -
                               model.design().points.row(i))
                                  .norm());
      }
      result.scores[a] = -dmin;
    }
    return result;
  }

  const std::vector<int> pruned = prune(summary, config.m0);
  std::vector<int> integrand;
  std::vector<int> candidates;
  if (config.prune_candidates_only) {
    integrand = all_indices(sample.size());
  } else {
    integrand = pruned;
  }
  for (int j : pruned) {
    if (!flags[j]) candidates.push_back(j);
  }
  if (candidates.empty()) {
    throw ConfigError("select_next: no unevaluated candidates left after pruning");
  }

  Eigen::VectorXd scores;
  switch (config.kind) {
    case CriterionConfig::Kind::Sur: {
      const QuadratureRule rule = gauss_hermite(config.q_nodes);
      if (batch != nullptr) {
        scores = j_sur(*batch, summary, config.variant, rule, candidates,
                       integrand);
      } else {
        scores = j_sur(model, sample, summary, config.variant, rule,
                       candidates, integrand);
      }
      break;
    }
    case CriterionConfig::Kind::Timse: {
      if (batch != nullptr) {
        scores = j_timse(*batch, summary, config.sigma_eps_sq, candidates,
                         integrand);
      } else {
        scores = j_timse(model, sample, summary, config.sigma_eps_sq,
                         candidates, integrand);
      }
      break;
    }
    case CriterionConfig::Kind::Rb: {
      const Eigen::VectorXd full = j_rb(summary, config.kappa, config.delta);
      scores.resize(candidates.size());
      for (std::size_t a = 0; a < candidates.size(); ++a) {
        scores[a] = -full[candidates[a]];
      }
      break;
    }
    case CriterionConfig::Kind::Ech: {
      scores.resize(candidates.size());
      for (std::size_t a = 0; a < candidates.size(); ++a) {
        scores[a] = -summary.tau[candidates[a]];
      }
      break;
    }
    case CriterionConfig::Kind::Maximin:
      break;  // handled above
  }

  SelectionResult result;
  result.searched_indices.clear();
  std::vector<double> kept_scores;
  kept_scores.reserve(candidates.size());
  int best_pos = -1;
  double best_score = kInf;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    if (std::isinf(scores[a]) && scores[a] > 0) continue;  // degenerate
    result.searched_indices.push_back(candidates[a]);
    kept_scores.push_back(scores[a]);
    if (scores[a] < best_score) {
      best_score = scores[a];
      best_pos = static_cast<int>(result.searched_indices.size()) - 1;
    }
  }
  if (best_pos < 0) {
    throw ConfigError("select_next: every candidate was degenerate");
  }
  result.scores = Eigen::Map<Eigen::VectorXd>(kept_scores.data(),
                                              kept_scores.size());
  result.chosen_index = result.searched_indices[best_pos];
  return result;
}

}  // namespace gpfail
