#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <numeric>
#include <vector>

#include "gpfail/criteria.hpp"
#include "gpfail/design.hpp"
#include "gpfail/estimate.hpp"
#include "gpfail/kriging.hpp"
#include "gpfail/lhs.hpp"
#include "gpfail/matern.hpp"
#include "gpfail/mc_sample.hpp"
#include "gpfail/posterior.hpp"
#include "gpfail/quadrature.hpp"
#include "gpfail/rng.hpp"
#include "gpfail/simulate.hpp"

namespace {

using namespace gpfail;

CovarianceSpec cov_for(int d) {
  CovarianceSpec cov;
  cov.variance = 1.0;
  cov.smoothness = 2.0;
  cov.ranges.assign(d, 0.3);
  return cov;
}

Design random_design(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Design design;
  design.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) design.points(i, k) = rng.uniform01();
  }
  design.values.resize(n);
  for (int i = 0; i < n; ++i) design.values(i) = rng.normal();
  return design;
}

Eigen::MatrixXd random_points(int m, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(m, d);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) pts(i, k) = rng.uniform01();
  }
  return pts;
}

void bm_covariance_matrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CovarianceSpec cov = cov_for(2);
  const Eigen::MatrixXd pts = random_points(n, 2, 3);
  Eigen::MatrixXd k(n, n);
  for (auto _ : state) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        k(i, j) = covariance(pts.row(i).transpose(), pts.row(j).transpose(),
                             cov);
      }
    }
    benchmark::DoNotOptimize(k.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_covariance_matrix)->Arg(50)->Arg(200);

void bm_fit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Design design = random_design(n, 2, 11);
  const CovarianceSpec cov = cov_for(2);
  for (auto _ : state) {
    const KrigingModel model = fit(design, TrendSpec::constant(), cov);
    benchmark::DoNotOptimize(&model);
  }
}
BENCHMARK(bm_fit)->Arg(20)->Arg(50)->Arg(100);

void bm_batch_predict(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Design design = random_design(50, 2, 17);
  const KrigingModel model = fit(design, TrendSpec::constant(), cov_for(2));
  const Eigen::MatrixXd pts = random_points(m, 2, 19);
  for (auto _ : state) {
    const BatchPredictor batch(model, pts);
    benchmark::DoNotOptimize(batch.sd().data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(bm_batch_predict)->Arg(1000)->Arg(10000);

void bm_summarize(benchmark::State& state) {
  const Design design = random_design(50, 2, 23);
  const KrigingModel model = fit(design, TrendSpec::constant(), cov_for(2));
  MCSample sample;
  sample.points = random_points(5000, 2, 29);
  sample.law = InputLaw::uniform(Box::unit(2));
  for (auto _ : state) {
    const PosteriorSummary summary = summarize(model, sample, 0.5);
    benchmark::DoNotOptimize(summary.tau.data());
  }
  state.SetItemsProcessed(state.iterations() * sample.size());
}
BENCHMARK(bm_summarize);

void bm_gauss_hermite(benchmark::State& state) {
  for (auto _ : state) {
    const QuadratureRule rule = gauss_hermite(12);
    benchmark::DoNotOptimize(rule.nodes.data());
  }
}
BENCHMARK(bm_gauss_hermite);

void bm_j_sur_scan(benchmark::State& state) {
  const int n_candidates = static_cast<int>(state.range(0));
  const Design design = random_design(20, 2, 31);
  const KrigingModel model = fit(design, TrendSpec::constant(), cov_for(2));
  MCSample sample;
  sample.points = random_points(500, 2, 37);
  sample.law = InputLaw::uniform(Box::unit(2));
  const PosteriorSummary summary = summarize(model, sample, 0.2);
  const BatchPredictor batch(model, sample.points);
  const QuadratureRule rule = gauss_hermite(12);
  std::vector<int> integrand(sample.size());
  std::iota(integrand.begin(), integrand.end(), 0);
  std::vector<int> candidates(integrand.begin(),
                              integrand.begin() + n_candidates);
  for (auto _ : state) {
    const Eigen::VectorXd scores =
        j_sur(batch, summary, 1, rule, candidates, integrand);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * n_candidates);
}
BENCHMARK(bm_j_sur_scan)->Arg(50)->Arg(500);

void bm_maximin_lhs(benchmark::State& state) {
  const Box box = Box::unit(2);
  for (auto _ : state) {
    const Eigen::MatrixXd pts = maximin_lhs(20, box, 1000, 41);
    benchmark::DoNotOptimize(pts.data());
  }
}
BENCHMARK(bm_maximin_lhs);

void bm_simulate_paths(benchmark::State& state) {
  const Eigen::MatrixXd pts = random_points(200, 1, 43);
  const CovarianceSpec cov = cov_for(1);
  for (auto _ : state) {
    const GPPathSet set = simulate_paths(pts, cov, 50, 47);
    benchmark::DoNotOptimize(set.paths.data());
  }
}
BENCHMARK(bm_simulate_paths);

void bm_estimate_params(benchmark::State& state) {
  const Eigen::MatrixXd pts = random_points(30, 1, 53);
  const CovarianceSpec truth = cov_for(1);
  const GPPathSet set = simulate_paths(pts, truth, 1, 59);
  Design design;
  design.points = pts;
  design.values = set.paths.row(0).transpose();
  CovarianceSpec init = truth;
  init.ranges[0] = 0.15;
  EstimateOptions options;
  options.starts = 1;
  options.max_iterations = 60;
  for (auto _ : state) {
    const EstimateResult result = estimate_params(
        design, TrendSpec::constant(), init, EstimateMode::REML, options);
    benchmark::DoNotOptimize(&result);
  }
}
BENCHMARK(bm_estimate_params);

}  // namespace

BENCHMARK_MAIN();
