#include "gpfail/estimate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gpfail/errors.hpp"
#include "gpfail/rng.hpp"

namespace gpfail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.83787706640934548356065947281;

struct ProfiledObjective {
  const Design& design;
  Eigen::MatrixXd H;  // l x n trend basis at the design
  EstimateMode mode;
  bool estimate_smoothness;
  double nugget_rel;
  double fixed_smoothness;
  Eigen::VectorXd lo, hi;  // simplex-parameter box

  // Parameter vector y: (-log rho_1, ..., -log rho_d) then optionally
  // log nu. Returns the negative profiled (restricted) log-likelihood and
  // fills sigma2_hat with the concentrated variance.
  double operator()(const Eigen::VectorXd& y, double* sigma2_hat) const {
    const int n = design.size();
    const int l = static_cast<int>(H.rows());
    const int d = design.dim();
    CovarianceSpec spec;
    spec.variance = 1.0;
    spec.ranges.resize(d);
    Eigen::VectorXd yc = y.cwiseMax(lo).cwiseMin(hi);
    for (int i = 0; i < d; ++i) spec.ranges[i] = std::exp(-yc[i]);
    spec.smoothness =
        estimate_smoothness ? std::exp(yc[d]) : fixed_smoothness;

    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < n; ++i) {
      C(i, i) = 1.0 + nugget_rel;
      for (int j = i + 1; j < n; ++j) {
        const double r = matern_correlation(
            scaled_distance(design.points.row(i).transpose(),
                            design.points.row(j).transpose(), spec),
            spec.smoothness);
        C(i, j) = r;
        C(j, i) = r;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) return kInf;

    double log_det_c = 0.0;
    for (int i = 0; i < n; ++i) {
      log_det_c += 2.0 * std::log(llt.matrixL()(i, i));
    }

    const Eigen::VectorXd ci_z = llt.solve(design.values);
    const Eigen::MatrixXd ci_ht = llt.solve(H.transpose());
    const Eigen::MatrixXd M = H * ci_ht;  // l x l
    Eigen::LLT<Eigen::MatrixXd> llt_m(M);
    if (llt_m.info() != Eigen::Success) return kInf;
    const Eigen::VectorXd beta = llt_m.solve(H * ci_z);
    const Eigen::VectorXd resid = design.values - H.transpose() * beta;
    const Eigen::VectorXd ci_r = llt.solve(resid);
    double qf = resid.dot(ci_r);
    if (qf < 0.0) qf = 0.0;

    const int denom = (mode == EstimateMode::REML) ? (n - l) : n;
    if (denom <= 0) return kInf;
    const double sigma2 = std::max(qf / denom, 1e-300);
    if (sigma2_hat != nullptr) *sigma2_hat = sigma2;

    double nll =
        0.5 * (denom * (kLog2Pi + std::log(sigma2)) + log_det_c + denom);
    if (mode == EstimateMode::REML) {
      double log_det_m = 0.0;
      for (int i = 0; i < l; ++i) {
        log_det_m += 2.0 * std::log(llt_m.matrixL()(i, i));
      }
      nll += 0.5 * log_det_m;
    }
    return std::isfinite(nll) ? nll : kInf;
  }
};

struct TrackedBest {
  Eigen::VectorXd y;
  double value = kInf;

  void offer(const Eigen::VectorXd& candidate, double v) {
    if (v < value) {
      value = v;
      y = candidate;
    }
  }
};

// Standard Nelder-Mead on a clamped objective; every evaluation is offered
// to the running best.
void nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                 const Eigen::VectorXd& start, double step, int max_iter,
                 TrackedBest& best) {
  const int dim = static_cast<int>(start.size());
  std::vector<Eigen::VectorXd> v(dim + 1, start);
  std::vector<double> fv(dim + 1);
  for (int i = 1; i <= dim; ++i) v[i][i - 1] += step;
  for (int i = 0; i <= dim; ++i) {
    fv[i] = f(v[i]);
    best.offer(v[i], fv[i]);
  }

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<int> order(dim + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    {
      std::vector<Eigen::VectorXd> v2(dim + 1);
      std::vector<double> f2(dim + 1);
      for (int i = 0; i <= dim; ++i) {
        v2[i] = v[order[i]];
        f2[i] = fv[order[i]];
      }
      v = std::move(v2);
      fv = std::move(f2);
    }
    double spread = 0.0;
    for (int i = 1; i <= dim; ++i) {
      spread = std::max(spread, (v[i] - v[0]).cwiseAbs().maxCoeff());
    }
    if (spread < 1e-8 && std::fabs(fv[dim] - fv[0]) <
                             1e-10 * (1.0 + std::fabs(fv[0]))) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) centroid += v[i];
    centroid /= dim;

    const Eigen::VectorXd xr = centroid + (centroid - v[dim]);
    const double fr = f(xr);
    best.offer(xr, fr);
    if (fr < fv[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[dim]);
      const double fe = f(xe);
      best.offer(xe, fe);
      if (fe < fr) {
        v[dim] = xe;
        fv[dim] = fe;
      } else {
        v[dim] = xr;
        fv[dim] = fr;
      }
      continue;
    }
    if (fr < fv[dim - 1]) {
      v[dim] = xr;
      fv[dim] = fr;
      continue;
    }
    const bool outside = fr < fv[dim];
    Eigen::VectorXd xc;
    if (outside) {
      xc = centroid + 0.5 * (xr - centroid);
    } else {
      xc = centroid - 0.5 * (centroid - v[dim]);
    }
    const double fc = f(xc);
    best.offer(xc, fc);
    if (fc < std::min(fr, fv[dim])) {
      v[dim] = xc;
      fv[dim] = fc;
      continue;
    }
    for (int i = 1; i <= dim; ++i) {
      v[i] = v[0] + 0.5 * (v[i] - v[0]);
      fv[i] = f(v[i]);
      best.offer(v[i], fv[i]);
    }
  }
}

Eigen::VectorXd axis_spread(const Design& design) {
  const int d = design.dim();
  Eigen::VectorXd spread(d);
  for (int i = 0; i < d; ++i) {
    const double w = design.points.col(i).maxCoeff() -
                     design.points.col(i).minCoeff();
    spread[i] = (w > 0.0) ? w : 1.0;
  }
  return spread;
}

}  // namespace

double log_likelihood(const Design& design, const TrendSpec& trend,
                      const CovarianceSpec& spec, EstimateMode mode,
                      double nugget_rel) {
  spec.validate();
  const int n = design.size();
  const int l = trend.size();
  const int denom = (mode == EstimateMode::REML) ? (n - l) : n;
  if (denom <= 0) {
    throw ConfigError("log_likelihood: too few observations for the trend");
  }
  // Reuse the profiled machinery at fixed ranges, then undo the variance
  // concentration to evaluate at the requested variance.
  ProfiledObjective obj{design,
                        trend.at_points(design.points),
                        mode,
                        false,
                        nugget_rel,
                        spec.smoothness,
                        Eigen::VectorXd::Constant(design.dim(), -kInf),
                        Eigen::VectorXd::Constant(design.dim(), kInf)};
  Eigen::VectorXd y(design.dim());
  for (int i = 0; i < design.dim(); ++i) y[i] = -std::log(spec.ranges[i]);
  double sigma2_hat = 0.0;
  const double nll_profiled = obj(y, &sigma2_hat);
  if (!std::isfinite(nll_profiled)) return -kInf;
  // nll(sigma2) = nll_profiled - denom/2 + denom/2 * (log(s2/s2hat) + s2hat/s2)
  const double ratio = sigma2_hat / spec.variance;
  const double nll = nll_profiled +
                     0.5 * denom * (std::log(spec.variance / sigma2_hat) +
                                    ratio - 1.0);
  return -nll;
}

EstimateResult estimate_params(const Design& design, const TrendSpec& trend,
                               const CovarianceSpec& init, EstimateMode mode,
                               const EstimateOptions& options) {
  init.validate();
  design.validate(design.default_separation_tol());
  const int n = design.size();
  const int l = trend.size();
  const int d = design.dim();
  if (d != init.dim()) {
    throw ConfigError("estimate_params: design dimension does not match init");
  }
  if (n < l + 2) {
    throw ConfigError("estimate_params: need at least l + 2 observations");
  }

  const int dim = d + (options.estimate_smoothness ? 1 : 0);
  const Eigen::VectorXd spread = axis_spread(design);
  Eigen::VectorXd lo(dim), hi(dim);
  for (int i = 0; i < d; ++i) {
    // y_i = -log rho_i, rho_i within [1e-3, 10] * spread.
    lo[i] = -std::log(10.0 * spread[i]);
    hi[i] = -std::log(1e-3 * spread[i]);
  }
  if (options.estimate_smoothness) {
    lo[d] = std::log(0.25);
    hi[d] = std::log(10.0);
  }

  ProfiledObjective obj{design,
                        trend.at_points(design.points),
                        mode,
                        options.estimate_smoothness,
                        options.nugget_rel,
                        init.smoothness,
                        lo,
                        hi};
  auto f = [&](const Eigen::VectorXd& y) { return obj(y, nullptr); };

  Eigen::VectorXd y0(dim);
  for (int i = 0; i < d; ++i) y0[i] = -std::log(init.ranges[i]);
  if (options.estimate_smoothness) y0[d] = std::log(init.smoothness);
  y0 = y0.cwiseMax(lo).cwiseMin(hi);

  TrackedBest best;
  Rng rng(options.seed);
  for (int s = 0; s < std::max(options.starts, 1); ++s) {
    Eigen::VectorXd start = y0;
    if (s > 0) {
      for (int i = 0; i < dim; ++i) {
        start[i] += rng.uniform(-1.5, 1.5);
      }
      start = start.cwiseMax(lo).cwiseMin(hi);
    }
    nelder_mead(f, start, 0.5, options.max_iterations, best);
  }

  const double init_objective =
      log_likelihood(design, trend, init, mode, options.nugget_rel);

  EstimateResult result;
  result.objective_init = init_objective;
  double sigma2_hat = 0.0;
  const double best_nll = obj(best.y, &sigma2_hat);
  const double best_objective = -best_nll;
  if (!std::isfinite(best_nll) || best_objective < init_objective) {
    result.spec = init;
    result.improved = false;
    result.objective = init_objective;
    return result;
  }
  const Eigen::VectorXd yc = best.y.cwiseMax(lo).cwiseMin(hi);
  result.spec.variance = sigma2_hat;
  result.spec.smoothness = options.estimate_smoothness
                               ? std::exp(yc[d])
                               : init.smoothness;
  result.spec.ranges.resize(d);
  for (int i = 0; i < d; ++i) result.spec.ranges[i] = std::exp(-yc[i]);
  result.improved = best_objective > init_objective;
  result.objective = best_objective;
  return result;
}

}  // namespace gpfail
