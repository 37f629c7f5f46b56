#include "gpfail/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <unordered_map>

#include "gpfail/design.hpp"
#include "gpfail/errors.hpp"
#include "gpfail/kriging.hpp"
#include "gpfail/lhs.hpp"
#include "gpfail/rng.hpp"
#include "gpfail/simulate.hpp"

namespace gpfail {

namespace {

// Linearly interpolated quantile of a sorted vector (the common "type 7"
// convention).
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) {
    return v.back();
  }
  const double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (const double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

std::string point_key(const Eigen::VectorXd& x) {
  std::string key(sizeof(double) * static_cast<std::size_t>(x.size()), '\0');
  std::memcpy(key.data(), x.data(), key.size());
  return key;
}

std::vector<char> evaluated_flags(const RunTrace& trace,
                                  const Eigen::MatrixXd& sample_points) {
  std::vector<char> flags(static_cast<std::size_t>(sample_points.rows()), 0);
  Design initial;
  initial.points = trace.points.topRows(trace.n0);
  initial.values = trace.values.head(trace.n0);
  const double tol = initial.default_separation_tol();
  for (Eigen::Index j = 0; j < sample_points.rows(); ++j) {
    for (int i = 0; i < trace.n0; ++i) {
      if ((sample_points.row(j) - initial.points.row(i)).norm() < tol) {
        flags[static_cast<std::size_t>(j)] = 1;
        break;
      }
    }
  }
  for (const Eigen::Index idx : trace.chosen_sample_indices) {
    flags[static_cast<std::size_t>(idx)] = 1;
  }
  return flags;
}

}  // namespace

double f_one_d(double x) {
  const double a = 0.4 * x - 0.3;
  return a * a + std::exp(-11.534 * std::pow(std::abs(x), 1.95)) +
         std::exp(-5.0 * (x - 0.8) * (x - 0.8));
}

double f_one_d(const Eigen::VectorXd& x) {
  if (x.size() != 1) {
    throw ConfigError("f_one_d: expected a 1-dimensional point");
  }
  return f_one_d(x(0));
}

double f_four_branch(double x1, double x2) {
  const double sq2 = std::sqrt(2.0);
  const double bend = 3.0 + 0.1 * (x1 - x2) * (x1 - x2);
  const double b1 = bend - (x1 + x2) / sq2;
  const double b2 = bend + (x1 + x2) / sq2;
  const double b3 = (x1 - x2) + 6.0 / sq2;
  const double b4 = (x2 - x1) + 6.0 / sq2;
  return std::min(std::min(b1, b2), std::min(b3, b4));
}

double f_four_branch(const Eigen::VectorXd& x) {
  if (x.size() != 2) {
    throw ConfigError("f_four_branch: expected a 2-dimensional point");
  }
  return f_four_branch(x(0), x(1));
}

void FourBranchStudySpec::validate() const {
  if (replications < 1) {
    throw ConfigError("FourBranchStudySpec: replications must be at least 1");
  }
  if (m < 2) {
    throw ConfigError("FourBranchStudySpec: m must be at least 2");
  }
  if (n0 < 3) {
    throw ConfigError("FourBranchStudySpec: n0 must be at least 3");
  }
  if (added_budget < 1) {
    throw ConfigError("FourBranchStudySpec: added_budget must be at least 1");
  }
  if (reestimate_every < 0) {
    throw ConfigError("FourBranchStudySpec: reestimate_every must be nonnegative");
  }
  if (criteria.empty()) {
    throw ConfigError("FourBranchStudySpec: criterion grid is empty");
  }
  for (const auto& c : criteria) {
    c.criterion.validate(m);
  }
  if (gammas.empty()) {
    throw ConfigError("FourBranchStudySpec: no gamma levels");
  }
  for (const double g : gammas) {
    if (!(g > 0.0)) {
      throw ConfigError("FourBranchStudySpec: gamma levels must be positive");
    }
  }
  if (lhs_trials < 1 || estimate_starts < 1) {
    throw ConfigError("FourBranchStudySpec: lhs_trials and estimate_starts must be positive");
  }
}

std::vector<LabeledCriterion> four_branch_default_criteria() {
  std::vector<LabeledCriterion> grid;
  for (int v = 1; v <= 4; ++v) {
    CriterionConfig c;
    c.kind = CriterionConfig::Kind::Sur;
    c.variant = v;
    grid.push_back({"sur" + std::to_string(v), c});
  }
  for (const double s : {1e-6, 1e-3, 1.0}) {
    CriterionConfig c;
    c.kind = CriterionConfig::Kind::Timse;
    c.sigma_eps_sq = s;
    std::string label = "timse-";
    label += (s == 1e-6 ? "1e-6" : (s == 1e-3 ? "1e-3" : "1"));
    grid.push_back({label, c});
  }
  {
    CriterionConfig c;
    c.kind = CriterionConfig::Kind::Ech;
    c.m0 = 0;
    grid.push_back({"ech", c});
  }
  {
    CriterionConfig c;
    c.kind = CriterionConfig::Kind::Rb;
    c.kappa = 2.0;
    c.delta = 1;
    c.m0 = 0;
    grid.push_back({"rb-d1", c});
  }
  {
    CriterionConfig c;
    c.kind = CriterionConfig::Kind::Rb;
    c.kappa = 2.0;
    c.delta = 2;
    c.m0 = 0;
    grid.push_back({"rb-d2", c});
  }
  return grid;
}

FourBranchReport run_four_branch_study(const FourBranchStudySpec& spec) {
  spec.validate();
  const std::size_t nc = spec.criteria.size();
  const std::size_t ng = spec.gammas.size();
  // censored[c][g] holds one value per replication, censored at the budget.
  std::vector<std::vector<std::vector<double>>> censored(
      nc, std::vector<std::vector<double>>(ng));
  std::vector<std::vector<int>> missed(nc, std::vector<int>(ng, 0));

  for (int r = 0; r < spec.replications; ++r) {
    const std::uint64_t sd =
        derive_seed(spec.base_seed, 3 * static_cast<std::uint64_t>(r));
    const std::uint64_t ss =
        derive_seed(spec.base_seed, 3 * static_cast<std::uint64_t>(r) + 1);
    const std::uint64_t se =
        derive_seed(spec.base_seed, 3 * static_cast<std::uint64_t>(r) + 2);
    for (std::size_t c = 0; c < nc; ++c) {
      ExperimentConfig cfg;
      cfg.objective = [](const Eigen::VectorXd& x) { return -f_four_branch(x); };
      cfg.domain = Box::symmetric(6.0, 2);
      cfg.input_law = InputLaw::normal(Eigen::VectorXd::Zero(2),
                                       Eigen::VectorXd::Ones(2));
      cfg.threshold = 0.0;
      cfg.n0 = spec.n0;
      cfg.budget = spec.n0 + spec.added_budget;
      cfg.m = spec.m;
      cfg.criterion = spec.criteria[c].criterion;
      cfg.reestimate_every = spec.reestimate_every;
      cfg.estimate_mode = spec.estimate_mode;
      cfg.estimate_starts = spec.estimate_starts;
      cfg.trend = TrendSpec::constant();
      cfg.cov_init.variance = 1.0;
      cfg.cov_init.smoothness = 2.0;
      cfg.cov_init.ranges = std::vector<double>(2, 3.0);
      cfg.seed_design = sd;
      cfg.seed_sample = ss;
      cfg.seed_estimation = se;
      cfg.lhs_trials = spec.lhs_trials;
      const RunTrace trace = run(cfg);
      for (std::size_t g = 0; g < ng; ++g) {
        const std::optional<int> n = n_gamma(trace, spec.gammas[g]);
        censored[c][g].push_back(
            static_cast<double>(n ? *n : spec.added_budget));
        if (!n) {
          ++missed[c][g];
        }
      }
    }
  }

  FourBranchReport report;
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t g = 0; g < ng; ++g) {
      NGammaRow row;
      row.label = spec.criteria[c].label;
      row.params = spec.criteria[c].criterion.describe();
      row.gamma = spec.gammas[g];
      row.mean_n = mean_of(censored[c][g]);
      row.p10 = percentile(censored[c][g], 0.10);
      row.p90 = percentile(censored[c][g], 0.90);
      row.not_attained_fraction =
          static_cast<double>(missed[c][g]) /
          static_cast<double>(spec.replications);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

GpPathStudySpec GpPathStudySpec::defaults(int d) {
  GpPathStudySpec spec;
  spec.d = d;
  spec.cov.variance = 1.0;
  spec.cov.smoothness = 2.0;
  switch (d) {
    case 1:
      spec.n0 = 3;
      spec.total_budget = 30;
      spec.cov.ranges = std::vector<double>(1, 0.100);
      break;
    case 2:
      spec.n0 = 10;
      spec.total_budget = 80;
      spec.cov.ranges = std::vector<double>(2, 0.252);
      break;
    case 3:
      spec.n0 = 15;
      spec.total_budget = 100;
      spec.cov.ranges = std::vector<double>(3, 0.363);
      break;
    default:
      throw ConfigError("GpPathStudySpec: d must be 1, 2 or 3");
  }
  CriterionConfig sur1;
  sur1.kind = CriterionConfig::Kind::Sur;
  sur1.variant = 1;
  spec.criteria.push_back({"sur1", sur1});
  return spec;
}

void GpPathStudySpec::validate() const {
  if (d < 1 || d > 3) {
    throw ConfigError("GpPathStudySpec: d must be 1, 2 or 3");
  }
  if (paths < 1) {
    throw ConfigError("GpPathStudySpec: paths must be at least 1");
  }
  const int exceed = static_cast<int>(std::ceil(0.02 * m));
  if (exceed < 1 || exceed + 1 > m) {
    throw ConfigError("GpPathStudySpec: m too small for the 2% threshold rule");
  }
  if (n0 < 2) {
    throw ConfigError("GpPathStudySpec: n0 must be at least 2");
  }
  if (total_budget < n0) {
    throw ConfigError("GpPathStudySpec: total_budget must be at least n0");
  }
  if (criteria.empty() && !include_reference) {
    throw ConfigError("GpPathStudySpec: nothing to run");
  }
  for (const auto& c : criteria) {
    c.criterion.validate(m);
  }
  cov.validate();
  if (static_cast<int>(cov.dim()) != d) {
    throw ConfigError("GpPathStudySpec: covariance dimension does not match d");
  }
  if (lhs_trials < 1) {
    throw ConfigError("GpPathStudySpec: lhs_trials must be positive");
  }
}

GpPathReport run_gp_path_study(const GpPathStudySpec& spec) {
  spec.validate();
  std::vector<LabeledCriterion> grid = spec.criteria;
  if (spec.include_reference) {
    CriterionConfig ref;
    ref.kind = CriterionConfig::Kind::Maximin;
    ref.m0 = 0;
    grid.push_back({"maximin", ref});
  }
  const std::size_t nc = grid.size();
  const int steps = spec.total_budget - spec.n0 + 1;
  // sq_rel[c][k] accumulates squared relative errors over replications.
  std::vector<std::vector<double>> sq_rel(nc, std::vector<double>(
                                                  static_cast<std::size_t>(steps), 0.0));
  const int exceed = static_cast<int>(std::ceil(0.02 * spec.m));
  const Box box = Box::unit(spec.d);

  for (int l = 0; l < spec.paths; ++l) {
    const std::uint64_t sd =
        derive_seed(spec.base_seed, 4 * static_cast<std::uint64_t>(l));
    const std::uint64_t ss =
        derive_seed(spec.base_seed, 4 * static_cast<std::uint64_t>(l) + 1);
    const std::uint64_t sp =
        derive_seed(spec.base_seed, 4 * static_cast<std::uint64_t>(l) + 2);

    const Eigen::MatrixXd init_points =
        maximin_lhs(spec.n0, box, spec.lhs_trials, sd);
    MCSample sample = draw_mc_sample(InputLaw::uniform(box), spec.m, ss);

    Eigen::MatrixXd joint(spec.n0 + spec.m, spec.d);
    joint.topRows(spec.n0) = init_points;
    joint.bottomRows(spec.m) = sample.points;
    const GPPathSet path_set = simulate_paths(joint, spec.cov, 1, sp);
    const Eigen::VectorXd path = path_set.paths.row(0).transpose();

    // Threshold making exactly `exceed` sample points fail: midpoint
    // between the order statistics on either side of the cut.
    std::vector<double> sorted(static_cast<std::size_t>(spec.m));
    for (int j = 0; j < spec.m; ++j) {
      sorted[static_cast<std::size_t>(j)] = path(spec.n0 + j);
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double u = 0.5 * (sorted[static_cast<std::size_t>(exceed - 1)] +
                            sorted[static_cast<std::size_t>(exceed)]);

    auto lookup = std::make_shared<std::unordered_map<std::string, double>>();
    lookup->reserve(static_cast<std::size_t>(joint.rows()));
    for (Eigen::Index r = 0; r < joint.rows(); ++r) {
      (*lookup)[point_key(joint.row(r).transpose())] = path(r);
    }

    for (std::size_t c = 0; c < nc; ++c) {
      ExperimentConfig cfg;
      cfg.objective = [lookup](const Eigen::VectorXd& x) {
        const auto it = lookup->find(point_key(x));
        if (it == lookup->end()) {
          throw NumericalError(
              "gp path study: objective queried off the simulated point set");
        }
        return it->second;
      };
      cfg.domain = box;
      cfg.input_law = InputLaw::uniform(box);
      cfg.threshold = u;
      cfg.n0 = spec.n0;
      cfg.budget = spec.total_budget;
      cfg.m = spec.m;
      cfg.criterion = grid[c].criterion;
      cfg.reestimate_every = 0;
      cfg.trend = TrendSpec::constant();
      cfg.cov_init = spec.cov;
      cfg.seed_design = sd;
      cfg.seed_sample = ss;
      cfg.seed_estimation = derive_seed(spec.base_seed, 4 * static_cast<std::uint64_t>(l) + 3);
      cfg.lhs_trials = spec.lhs_trials;
      cfg.initial_points = init_points;
      cfg.sample = sample;
      const RunTrace trace = run(cfg);
      for (int k = 0; k < steps; ++k) {
        const double rel =
            (trace.alpha_hat(k) - trace.alpha_m) / trace.alpha_m;
        sq_rel[c][static_cast<std::size_t>(k)] += rel * rel;
      }
    }
  }

  GpPathReport report;
  for (std::size_t c = 0; c < nc; ++c) {
    for (int k = 0; k < steps; ++k) {
      RmseRow row;
      row.label = grid[c].label;
      row.params = grid[c].criterion.describe();
      row.d = spec.d;
      row.n = spec.n0 + k;
      const double mse =
          sq_rel[c][static_cast<std::size_t>(k)] / static_cast<double>(spec.paths);
      row.rmse_db = (mse == 0.0) ? -std::numeric_limits<double>::infinity()
                                 : 10.0 * std::log10(mse);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

ExperimentConfig one_d_illustration_config() {
  ExperimentConfig cfg;
  cfg.objective = [](const Eigen::VectorXd& x) { return f_one_d(x); };
  cfg.domain = Box::symmetric(1.5, 1);
  cfg.input_law = InputLaw::normal(Eigen::VectorXd::Zero(1),
                                   Eigen::VectorXd::Constant(1, 0.4));
  cfg.threshold = 1.0;
  cfg.n0 = 4;
  cfg.budget = 12;
  cfg.m = 1500;
  cfg.criterion.kind = CriterionConfig::Kind::Sur;
  cfg.criterion.variant = 1;
  cfg.criterion.q_nodes = 12;
  cfg.criterion.m0 = 0;
  cfg.reestimate_every = 0;
  cfg.cov_init.variance = 0.25;
  cfg.cov_init.smoothness = 2.0;
  cfg.cov_init.ranges = std::vector<double>(1, 0.4);
  cfg.seed_design = 101;
  cfg.seed_sample = 202;
  cfg.seed_estimation = 303;
  return cfg;
}

StepScores scores_at_step(const ExperimentConfig& config, int n_obs) {
  config.validate();
  if (n_obs < config.n0 || n_obs > config.budget) {
    throw ConfigError("scores_at_step: n_obs outside [n0, budget]");
  }
  ExperimentConfig truncated = config;
  truncated.budget = n_obs;
  const RunTrace trace = run(truncated);

  Design design;
  design.points = trace.points.topRows(n_obs);
  design.values = trace.values.head(n_obs);
  const CovarianceSpec cov =
      trace.estimates.empty() ? config.cov_init : trace.estimates.back().spec;
  const KrigingModel model = fit(design, config.trend, cov, config.nugget_rel);

  StepScores out;
  out.n_obs = n_obs;
  out.sample = config.sample ? *config.sample
                             : draw_mc_sample(config.input_law, config.m,
                                              config.seed_sample);
  const BatchPredictor batch(model, out.sample.points);
  out.summary = summarize(batch, config.threshold);
  const std::vector<char> evaluated = evaluated_flags(trace, out.sample.points);
  out.selection = select_next(config.criterion, model, out.sample, out.summary,
                              evaluated, &batch);
  return out;
}

}  // namespace gpfail
