#pragma once

// Brute-force reference implementations used by the unit and acceptance
// suites. Everything here deliberately avoids the library's own solvers:
// linear systems go through a hand-rolled Gaussian elimination and
// integrals through error-controlled adaptive Simpson.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gpfail/design.hpp"
#include "gpfail/matern.hpp"
#include "gpfail/normal.hpp"
#include "gpfail/quadrature.hpp"
#include "gpfail/rng.hpp"
#include "gpfail/trend.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Dense linear algebra, independent of Eigen's solvers.

// Solves A X = B by Gaussian elimination with partial pivoting.
inline Eigen::MatrixXd gauss_solve(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || b.rows() != n) {
    throw std::invalid_argument("gauss_solve: shape mismatch");
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      b.row(piv).swap(b.row(col));
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
      b.row(r) -= f * b.row(col);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    b.row(col) /= a(col, col);
    for (int r = 0; r < col; ++r) {
      b.row(r) -= a(r, col) * b.row(col);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Universal kriging through the textbook generalized-least-squares formulas
// rather than the bordered system: beta_hat = (F' K^-1 F)^-1 F' K^-1 y,
// mean(x) = f(x)' beta_hat + k(x)' K^-1 (y - F beta_hat),
// cov(x, x') = k(x, x') - k(x)' K^-1 k(x') + d(x)' (F' K^-1 F)^-1 d(x')
// with d(x) = f(x) - F' K^-1 k(x).
class GlsKriging {
 public:
  GlsKriging(const gpfail::Design& design, const gpfail::TrendSpec& trend,
             const gpfail::CovarianceSpec& cov, double nugget_abs)
      : design_(design), trend_(trend), cov_(cov) {
    const int n = design.size();
    const int l = trend.size();
    k_.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        k_(i, j) = gpfail::covariance(design.points.row(i).transpose(),
                                      design.points.row(j).transpose(), cov);
      }
      k_(i, i) += nugget_abs;
    }
    f_ = trend.at_points(design.points).transpose();  // n x l
    kinv_f_ = gauss_solve(k_, f_);
    a_ = f_.transpose() * kinv_f_;  // l x l
    const Eigen::MatrixXd kinv_y = gauss_solve(k_, design.values);
    beta_ = gauss_solve(a_, f_.transpose() * kinv_y);
    kinv_resid_ = gauss_solve(k_, design.values - f_ * beta_);
  }

  double mean(const Eigen::VectorXd& x) const {
    return trend_.at(x).dot(beta_) + k_vec(x).dot(kinv_resid_);
  }

  double cov(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const Eigen::VectorXd kx = k_vec(x);
    const Eigen::VectorXd ky = k_vec(y);
    const Eigen::VectorXd kinv_ky = gauss_solve(k_, ky);
    const Eigen::VectorXd dx = trend_.at(x) - f_.transpose() * gauss_solve(k_, kx);
    const Eigen::VectorXd dy = trend_.at(y) - f_.transpose() * kinv_ky;
    return gpfail::covariance(x, y, cov_) - kx.dot(kinv_ky) +
           dx.dot(gauss_solve(a_, dy).col(0));
  }

  double variance(const Eigen::VectorXd& x) const { return cov(x, x); }

 private:
  Eigen::VectorXd k_vec(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v(design_.size());
    for (int i = 0; i < design_.size(); ++i) {
      v(i) = gpfail::covariance(x, design_.points.row(i).transpose(), cov_);
    }
    return v;
  }

  gpfail::Design design_;
  gpfail::TrendSpec trend_;
  gpfail::CovarianceSpec cov_;
  Eigen::MatrixXd k_, f_, kinv_f_, a_;
  Eigen::VectorXd beta_, kinv_resid_;
};

// ---------------------------------------------------------------------------
// Error-controlled one-dimensional integration.

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

// E[max(0, kappa^delta - |q + U|^delta)], U standard normal, integrated
// piecewise between the kinks of the integrand.
inline double g_defining_expectation(double p, double kappa, int delta) {
  const double q = gpfail::normal_quantile(p);
  const double kd = std::pow(kappa, static_cast<double>(delta));
  const auto f = [&](double v) {
    const double t = std::abs(q + v);
    const double excess = kd - std::pow(t, static_cast<double>(delta));
    return excess > 0.0 ? gpfail::normal_pdf(v) * excess : 0.0;
  };
  std::vector<double> cuts = {-13.0, -q - kappa, -q, -q + kappa, 13.0};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], -13.0);
    const double b = std::min(cuts[i + 1], 13.0);
    if (b > a) total += adaptive_simpson(f, a, b, 1e-13);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Quadrature rule encoding a T-point trapezoid over +-half_width predictive
// standard deviations, in the node convention of QuadratureRule
// (z = mean + sd * sqrt(2) * node).
inline gpfail::QuadratureRule trapezoid_rule(int t_points, double half_width) {
  gpfail::QuadratureRule r;
  r.nodes.resize(t_points);
  r.weights.resize(t_points);
  const double h = 2.0 * half_width / (t_points - 1);
  for (int t = 0; t < t_points; ++t) {
    const double s = -half_width + t * h;
    r.nodes(t) = s / std::numbers::sqrt2;
    r.weights(t) =
        ((t == 0 || t == t_points - 1) ? 0.5 : 1.0) * h * gpfail::normal_pdf(s);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random instances with a guaranteed pairwise separation, so that the
// comparisons against dense solves are not dominated by conditioning noise.
// The requested separation is halved whenever the unit cube cannot
// accommodate it, so dense configurations still terminate.
inline Eigen::MatrixXd separated_points(gpfail::Rng& rng, int n, int d,
                                        double min_sep) {
  Eigen::MatrixXd pts(n, d);
  double sep = min_sep;
  for (;;) {
    int placed = 0;
    int attempts = 0;
    while (placed < n && attempts < 20000) {
      ++attempts;
      Eigen::VectorXd x(d);
      for (int k = 0; k < d; ++k) x(k) = rng.uniform(0.0, 1.0);
      bool ok = true;
      for (int i = 0; i < placed && ok; ++i) {
        ok = (pts.row(i).transpose() - x).norm() >= sep;
      }
      if (ok) pts.row(placed++) = x.transpose();
    }
    if (placed == n) return pts;
    sep *= 0.5;
    if (sep < 1e-6) {
      throw std::runtime_error("separated_points: separation too tight");
    }
  }
}

}  // namespace oracle
