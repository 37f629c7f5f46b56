// Acceptance gate. Each criterion prints one [PASS]/[FAIL] line with the
// measured quantities and its runtime; the exit status is the number of
// failed criteria. Tolerances are pinned here and nowhere else.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gpfail/criteria.hpp"
#include "gpfail/csv.hpp"
#include "gpfail/design.hpp"
#include "gpfail/kriging.hpp"
#include "gpfail/mc_sample.hpp"
#include "gpfail/quadrature.hpp"
#include "gpfail/rng.hpp"
#include "gpfail/sequencer.hpp"
#include "gpfail/studies.hpp"
#include "support/oracles.hpp"

using namespace gpfail;

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& text) {
  std::printf("                note: %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double rel_gap(double a, double b, double floor) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

// Randomly ordered one-dimensional design with a guaranteed pairwise
// separation of 0.5 / n, so conditioning never depends on rejection luck.
Eigen::MatrixXd jittered_grid_1d(Rng& rng, int n) {
  Eigen::MatrixXd pts(n, 1);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = (i + 0.25 + 0.5 * rng.uniform01()) / n;
  }
  for (int i = n - 1; i > 0; --i) {
    const int j =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(pts(i, 0), pts(j, 0));
  }
  return pts;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// 1. The closed-form expected-reduction factor of the kappa/delta family
//    equals its defining expectation E[max(0, kappa^delta - |q + U|^delta)].

void criterion_1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (int delta : {1, 2}) {
      for (int i = 1; i <= 99; ++i) {
        const double p = static_cast<double>(i) / 100.0;
        const double got = g_closed(p, kappa, delta);
        const double want = oracle::g_defining_expectation(p, kappa, delta);
        worst = std::max(worst, std::abs(got - want));
      }
    }
  }
  const double dt = seconds_since(t0);
  report(1, worst < 1e-6 && dt < 1.0,
         fmt("closed-form reduction factor vs integrated definition over "
             "594 (p, kappa, delta) combinations; worst abs gap %.2e "
             "(tol 1e-06), %.2f s (limit 1 s)",
             worst, dt));
}

// ---------------------------------------------------------------------------
// 2. Kriging predictions and posterior covariances match an independent
//    dense generalized-least-squares solve; a fitted model interpolates
//    its design and reproduces constant data exactly.

void criterion_2() {
  const auto t0 = Clock::now();
  double worst_dense = 0.0;
  double worst_interp = 0.0;
  double worst_const = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(derive_seed(4202, s));
    const int d = 1 + static_cast<int>(s % 3);
    const bool linear = (s % 5 == 0);
    int n = 4 + static_cast<int>(s % (d == 1 ? 3 : 7));
    if (linear) n = std::max(n, d + 3);
    Design design;
    design.points = (d == 1) ? jittered_grid_1d(rng, n)
                             : oracle::separated_points(rng, n, d, 0.12);
    design.values.resize(n);
    for (int i = 0; i < n; ++i) design.values(i) = rng.normal();
    CovarianceSpec cov;
    cov.variance = 0.5 + rng.uniform01();
    cov.smoothness = 0.5 + 0.5 * static_cast<double>(rng.below(5));
    cov.ranges.assign(d, 0.0);
    for (int k = 0; k < d; ++k) cov.ranges[k] = 0.3 + 0.4 * rng.uniform01();
    const TrendSpec trend =
        linear ? TrendSpec::linear(d) : TrendSpec::constant();

    const KrigingModel model = fit(design, trend, cov);
    const oracle::GlsKriging ref(design, trend, cov, model.nugget());

    Eigen::MatrixXd queries(5, d);
    for (int t = 0; t < 5; ++t) {
      for (int k = 0; k < d; ++k) queries(t, k) = rng.uniform01();
    }
    for (int a = 0; a < queries.rows(); ++a) {
      const Eigen::VectorXd x = queries.row(a).transpose();
      const Prediction pred = model.predict(x);
      worst_dense = std::max(worst_dense, rel_gap(pred.mean, ref.mean(x), 1e-2));
      worst_dense =
          std::max(worst_dense, rel_gap(pred.variance, ref.variance(x), 1e-2));
      for (int b = a + 1; b < queries.rows(); ++b) {
        const Eigen::VectorXd y = queries.row(b).transpose();
        worst_dense = std::max(
            worst_dense,
            rel_gap(model.posterior_covariance(x, y), ref.cov(x, y), 1e-2));
      }
    }

    const double scale = std::max(1.0, design.values.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
      const Prediction at =
          model.predict(design.points.row(i).transpose());
      worst_interp = std::max(
          worst_interp, std::abs(at.mean - design.values(i)) / scale);
    }

    Design flat = design;
    flat.values.setConstant(2.5);
    const KrigingModel constant_model = fit(flat, TrendSpec::constant(), cov);
    for (int a = 0; a < queries.rows(); ++a) {
      const Prediction pred =
          constant_model.predict(queries.row(a).transpose());
      worst_const = std::max(worst_const, std::abs(pred.mean - 2.5) / 2.5);
    }
  }
  const double dt = seconds_since(t0);
  report(2,
         worst_dense < 1e-8 && worst_interp < 1e-6 && worst_const < 1e-8 &&
             dt < 10.0,
         fmt("50 random models vs dense GLS solve; worst rel gap %.2e "
             "(tol 1e-08), interpolation residual %.2e (tol 1e-06), "
             "constant-data residual %.2e (tol 1e-08), %.2f s (limit 10 s)",
             worst_dense, worst_interp, worst_const, dt));
}

// ---------------------------------------------------------------------------
// 3. The variant-3 lookahead criterion at its production 12-node rule
//    against a 200-node full-refit oracle.

double refit_score_v3(const Design& design, const CovarianceSpec& cov,
                      const MCSample& sample, double threshold, double xi,
                      double sd, int k, const QuadratureRule& rule) {
  double score = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double z = xi + sd * std::numbers::sqrt2 * rule.nodes(q);
    const KrigingModel refit =
        fit(design.with_point(sample.points.row(k).transpose(), z),
            TrendSpec::constant(), cov);
    const PosteriorSummary after = summarize(refit, sample, threshold);
    score += rule.weights(q) * after.tau.mean();
  }
  return score;
}

void criterion_3() {
  const auto t0 = Clock::now();
  const QuadratureRule dense = oracle::trapezoid_rule(200, 8.0);
  const QuadratureRule production = gauss_hermite(12);
  double worst = 0.0;
  double worst_matched = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(derive_seed(4303, s));
    const Eigen::MatrixXd pts = jittered_grid_1d(rng, 23);
    Design design;
    design.points = pts.topRows(3);
    design.values.resize(3);
    for (int i = 0; i < 3; ++i) design.values(i) = rng.normal();
    CovarianceSpec cov;
    cov.variance = 1.0;
    cov.smoothness = 2.0;
    cov.ranges = {0.3};
    const double threshold = design.values.mean();

    const KrigingModel model = fit(design, TrendSpec::constant(), cov);
    MCSample sample;
    sample.points = pts.bottomRows(20);
    sample.law = InputLaw::uniform(Box::unit(1));
    const PosteriorSummary summary = summarize(model, sample, threshold);
    std::vector<int> all(20);
    std::iota(all.begin(), all.end(), 0);

    const Eigen::VectorXd mine =
        j_sur(model, sample, summary, 3, production, all, all);
    const Eigen::VectorXd matched =
        j_sur(model, sample, summary, 3, dense, all, all);
    const BatchPredictor batch(model, sample.points);
    for (int k = 0; k < 20; ++k) {
      const double want =
          refit_score_v3(design, cov, sample, threshold, batch.mean()(k),
                         batch.sd()(k), k, dense);
      worst = std::max(worst, rel_gap(mine(k), want, 1e-8));
      worst_matched = std::max(worst_matched, rel_gap(matched(k), want, 1e-8));
    }
  }
  const double dt = seconds_since(t0);
  report(3, worst < 1e-4 && dt < 30.0,
         fmt("variant-3 lookahead at 12 nodes vs 200-node full-refit oracle "
             "on 10 one-dimensional states; worst rel gap %.2e (tol 1e-04), "
             "%.1f s (limit 30 s)",
             worst, dt));
  note(fmt("with the 200-node rule on both sides the gap is %.2e; the "
           "remainder is the 12-node quantization of the lookahead "
           "integral, not the augmentation algebra",
           worst_matched));
}

// ---------------------------------------------------------------------------
// 4. Squared-average variants lower-bound their linear counterparts at
//    every candidate (Cauchy-Schwarz on the quadrature measure).

void criterion_4() {
  const auto t0 = Clock::now();
  const QuadratureRule rule = gauss_hermite(12);
  double worst = 0.0;
  int compared = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(4404, s));
    const int d = 1 + static_cast<int>(s % 3);
    const int n = 5 + static_cast<int>(s % 3);
    const int m = 30;
    const Eigen::MatrixXd pts =
        (d == 1) ? jittered_grid_1d(rng, n + m)
                 : oracle::separated_points(rng, n + m, d, 0.1);
    Design design;
    design.points = pts.topRows(n);
    design.values.resize(n);
    for (int i = 0; i < n; ++i) design.values(i) = rng.normal();
    CovarianceSpec cov;
    cov.variance = 1.0;
    cov.smoothness = 2.0;
    cov.ranges.assign(d, 0.3);
    const KrigingModel model = fit(design, TrendSpec::constant(), cov);
    MCSample sample;
    sample.points = pts.bottomRows(m);
    sample.law = InputLaw::uniform(Box::unit(d));
    const PosteriorSummary summary =
        summarize(model, sample, design.values.mean());
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    Eigen::VectorXd scores[5];
    for (int v = 1; v <= 4; ++v) {
      scores[v] = j_sur(model, sample, summary, v, rule, all, all);
    }
    for (int i = 0; i < m; ++i) {
      if (!std::isfinite(scores[1](i)) || !std::isfinite(scores[2](i)) ||
          !std::isfinite(scores[3](i)) || !std::isfinite(scores[4](i))) {
        continue;
      }
      worst = std::max(worst, scores[1](i) - scores[3](i));
      worst = std::max(worst, scores[2](i) - scores[4](i));
      ++compared;
    }
  }
  const double dt = seconds_since(t0);
  report(4, worst <= 1e-10,
         fmt("variant ordering over 20 random states (%d candidates); worst "
             "violation %.2e (tol 1e-10), %.2f s",
             compared, worst, dt));
}

// ---------------------------------------------------------------------------
// 9. Identical seeds produce byte-identical CSV artifacts for single runs
//    and for both study drivers.

void criterion_9() {
  const auto t0 = Clock::now();
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gpfail-acceptance";
  fs::create_directories(dir);

  ExperimentConfig config;
  config.objective = [](const Eigen::VectorXd& x) {
    return std::sin(4.0 * x(0)) + 1.2 * x(0);
  };
  config.domain = Box::unit(1);
  config.input_law = InputLaw::uniform(config.domain);
  config.threshold = 0.8;
  config.n0 = 4;
  config.budget = 12;
  config.m = 200;
  config.criterion.kind = CriterionConfig::Kind::Sur;
  config.criterion.variant = 1;
  config.criterion.q_nodes = 6;
  config.criterion.m0 = 50;
  config.reestimate_every = 3;
  config.cov_init.variance = 1.0;
  config.cov_init.smoothness = 2.0;
  config.cov_init.ranges = {0.3};
  config.seed_design = 11;
  config.seed_sample = 22;
  config.seed_estimation = 33;
  config.lhs_trials = 200;
  const std::string trace_a = (dir / "trace_a.csv").string();
  const std::string trace_b = (dir / "trace_b.csv").string();
  write_trace_csv(trace_a, run(config));
  write_trace_csv(trace_b, run(config));
  const bool trace_ok = slurp(trace_a) == slurp(trace_b) &&
                        !slurp(trace_a).empty();

  FourBranchStudySpec fb;
  fb.replications = 2;
  fb.m = 1500;
  fb.n0 = 8;
  fb.added_budget = 5;
  fb.reestimate_every = 0;
  fb.gammas = {0.5, 0.25};
  CriterionConfig ech;
  ech.kind = CriterionConfig::Kind::Ech;
  ech.m0 = 0;
  CriterionConfig sur1;
  sur1.kind = CriterionConfig::Kind::Sur;
  sur1.variant = 1;
  sur1.q_nodes = 6;
  sur1.m0 = 100;
  fb.criteria = {{"ech", ech}, {"sur1", sur1}};
  const std::string ng_a = (dir / "ngamma_a.csv").string();
  const std::string ng_b = (dir / "ngamma_b.csv").string();
  write_ngamma_csv(ng_a, run_four_branch_study(fb));
  write_ngamma_csv(ng_b, run_four_branch_study(fb));
  const bool study_ok = slurp(ng_a) == slurp(ng_b) && !slurp(ng_a).empty();

  GpPathStudySpec gp = GpPathStudySpec::defaults(1);
  gp.paths = 3;
  gp.m = 80;
  gp.total_budget = 6;
  gp.criteria[0].criterion.q_nodes = 6;
  gp.criteria[0].criterion.m0 = 40;
  const std::string rmse_a = (dir / "rmse_a.csv").string();
  const std::string rmse_b = (dir / "rmse_b.csv").string();
  write_rmse_csv(rmse_a, run_gp_path_study(gp));
  write_rmse_csv(rmse_b, run_gp_path_study(gp));
  const bool path_ok = slurp(rmse_a) == slurp(rmse_b) && !slurp(rmse_a).empty();

  fs::remove_all(dir);
  const double dt = seconds_since(t0);
  report(9, trace_ok && study_ok && path_ok,
         fmt("repeated runs with identical seeds: trace csv %s, "
             "series-system study csv %s, path study csv %s, %.1f s",
             trace_ok ? "identical" : "DIFFERS",
             study_ok ? "identical" : "DIFFERS",
             path_ok ? "identical" : "DIFFERS", dt));
}

// ---------------------------------------------------------------------------
// 10. One-dimensional walkthrough: after the 12-evaluation budget the
//     estimate is within 15% of the Monte Carlo reference, and the first
//     selected point lies near the origin.

void criterion_10() {
  const auto t0 = Clock::now();
  const ExperimentConfig config = one_d_illustration_config();
  const RunTrace trace = run(config);
  const double rel =
      std::abs(trace.final_estimate() - trace.alpha_m) / trace.alpha_m;
  const StepScores step = scores_at_step(config, 4);
  const double x = step.sample.points(step.selection.chosen_index, 0);
  const double dt = seconds_since(t0);
  report(10, rel < 0.15 && std::abs(x) <= 0.35,
         fmt("walkthrough estimate rel error %.3f (tol 0.15), first "
             "selection at x = %+.3f (|x| <= 0.35), %.1f s",
             rel, x, dt));
}

// ---------------------------------------------------------------------------
// 5 and 6. Four-branch series system at desk scale, one shared study:
//    stabilization indices for the variant-1 criterion land in their
//    expected windows, and the criterion ranking reproduces.

double mean_n_of(const FourBranchReport& report, const std::string& label,
                 double gamma) {
  for (const auto& row : report.rows) {
    if (row.label == label && std::abs(row.gamma - gamma) < 1e-12) {
      return row.mean_n;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void criteria_5_and_6() {
  const auto t0 = Clock::now();
  FourBranchStudySpec spec;
  spec.replications = 20;
  spec.m = 10000;
  spec.n0 = 10;
  spec.added_budget = 60;
  spec.reestimate_every = 10;
  spec.gammas = {0.10, 0.03};
  CriterionConfig sur1;
  sur1.kind = CriterionConfig::Kind::Sur;
  sur1.variant = 1;
  CriterionConfig timse_small;
  timse_small.kind = CriterionConfig::Kind::Timse;
  timse_small.sigma_eps_sq = 1e-6;
  CriterionConfig timse_large;
  timse_large.kind = CriterionConfig::Kind::Timse;
  timse_large.sigma_eps_sq = 1.0;
  CriterionConfig ech;
  ech.kind = CriterionConfig::Kind::Ech;
  ech.m0 = 0;
  spec.criteria = {{"sur1", sur1},
                   {"timse-1e-6", timse_small},
                   {"timse-1", timse_large},
                   {"ech", ech}};
  const FourBranchReport report_fb = run_four_branch_study(spec);
  const double dt = seconds_since(t0);

  const double sur1_10 = mean_n_of(report_fb, "sur1", 0.10);
  const double sur1_03 = mean_n_of(report_fb, "sur1", 0.03);
  const double timse_small_03 = mean_n_of(report_fb, "timse-1e-6", 0.03);
  const double timse_large_03 = mean_n_of(report_fb, "timse-1", 0.03);
  const double ech_10 = mean_n_of(report_fb, "ech", 0.10);

  report(5,
         sur1_10 >= 10.0 && sur1_10 <= 25.0 && sur1_03 >= 18.0 &&
             sur1_03 <= 35.0,
         fmt("series system, 20 replications, m = 10000: variant-1 mean "
             "n(0.10) = %.1f (window [10, 25]), mean n(0.03) = %.1f "
             "(window [18, 35]), %.0f s",
             sur1_10, sur1_03, dt));
  report(6, timse_large_03 > timse_small_03 && sur1_10 < ech_10,
         fmt("same study: targeted-variance mean n(0.03) %.1f at noise 1 vs "
             "%.1f at noise 1e-6 (must be larger), variant-1 mean n(0.10) "
             "%.1f vs misclassification rule %.1f (must be smaller)",
             timse_large_03, timse_small_03, sur1_10, ech_10));
}

// ---------------------------------------------------------------------------
// 7. Synthetic-path study in one dimension: the variant-1 criterion ends
//    with strictly lower rMSE than the space-filling reference.

double rmse_at(const GpPathReport& report, const std::string& label, int n) {
  for (const auto& row : report.rows) {
    if (row.label == label && row.n == n) return row.rmse_db;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void criterion_7() {
  const auto t0 = Clock::now();
  GpPathStudySpec spec = GpPathStudySpec::defaults(1);
  spec.paths = 200;
  const GpPathReport report_gp = run_gp_path_study(spec);
  const double dt = seconds_since(t0);
  const double sur1 = rmse_at(report_gp, "sur1", spec.total_budget);
  const double reference = rmse_at(report_gp, "maximin", spec.total_budget);
  report(7, sur1 < reference,
         fmt("200 synthetic paths, budget 30: final rMSE %.1f dB (variant 1) "
             "vs %.1f dB (space-filling reference), %.0f s",
             sur1, reference, dt));
}

// ---------------------------------------------------------------------------
// 8. Candidate pruning is neutral: with and without it the variant-1
//    criterion ends within 1 dB on the same 100-path study.

void criterion_8() {
  const auto t0 = Clock::now();
  GpPathStudySpec spec = GpPathStudySpec::defaults(1);
  spec.paths = 100;
  spec.include_reference = false;
  CriterionConfig pruned;
  pruned.kind = CriterionConfig::Kind::Sur;
  pruned.variant = 1;
  pruned.m0 = 50;
  CriterionConfig full;
  full.kind = CriterionConfig::Kind::Sur;
  full.variant = 1;
  full.m0 = 0;
  spec.criteria = {{"sur1-m0-50", pruned}, {"sur1-full", full}};
  const GpPathReport report_gp = run_gp_path_study(spec);
  const double dt = seconds_since(t0);
  const double with_pruning = rmse_at(report_gp, "sur1-m0-50", spec.total_budget);
  const double without = rmse_at(report_gp, "sur1-full", spec.total_budget);
  const double gap = std::abs(with_pruning - without);
  report(8, gap < 1.0,
         fmt("100 synthetic paths: final rMSE %.1f dB with 50-candidate "
             "pruning vs %.1f dB without, gap %.2f dB (tol 1 dB), %.0f s",
             with_pruning, without, gap, dt));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_9();
  criterion_10();
  criteria_5_and_6();
  criterion_7();
  criterion_8();
  std::printf("acceptance: %d/10 criteria passed, %.0f s total\n",
              10 - failures, seconds_since(t0));
  return failures;
}
