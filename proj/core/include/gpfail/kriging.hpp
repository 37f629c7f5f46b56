#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <memory>

#include "gpfail/design.hpp"
#include "gpfail/matern.hpp"
#include "gpfail/trend.hpp"

namespace gpfail {

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Universal kriging model. Fitting factorizes the bordered system
//
//   [ K   H^T ] [ lambda ]   [ k(x, x_n) ]
//   [ H   0   ] [ mu     ] = [ h(x)      ]
//
// once (K the design covariance matrix with nugget on the diagonal, H the
// l x n trend basis at the design); every prediction is then a single
// back-substitution. The model is immutable after fit and safe to share
// across concurrent readers.
class KrigingModel {
 public:
  KrigingModel() = default;

  const Design& design() const { return design_; }
  const TrendSpec& trend() const { return trend_; }
  const CovarianceSpec& cov() const { return cov_; }
  double nugget() const { return nugget_; }
  int n() const { return design_.size(); }
  int l() const { return trend_.size(); }

  Prediction predict(const Eigen::VectorXd& x) const;

  double posterior_covariance(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) const;

  // Right-hand side [k(x, x_n); h(x)] of the bordered system.
  Eigen::VectorXd rhs_at(const Eigen::VectorXd& x) const;

  // Solution [lambda; mu] for a single right-hand side or a batch of them.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

  // Number of times a negative predicted variance was clamped to zero.
  long variance_clamp_count() const { return clamp_count_->load(); }

  friend KrigingModel fit(const Design&, const TrendSpec&,
                          const CovarianceSpec&, double);

 private:
  Design design_;
  TrendSpec trend_;
  CovarianceSpec cov_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double nugget_ = 0.0;  // absolute value actually added to the diagonal
  std::shared_ptr<std::atomic<long>> clamp_count_ =
      std::make_shared<std::atomic<long>>(0);

  double clamp_variance(double v) const;
};

// Fits a model. nugget_rel scales with cov.variance; on a failed
// factorization the nugget is escalated tenfold up to 1e-4 * variance
// before giving up.
KrigingModel fit(const Design& design, const TrendSpec& trend,
                 const CovarianceSpec& cov, double nugget_rel = 1e-8);

// One-point design extension with the new observation still unknown.
// Augmented means are affine in the hypothetical value z; weights and
// variances do not depend on z at all.
class AugmentedPredictor {
 public:
  AugmentedPredictor(const KrigingModel& model, const Eigen::VectorXd& x_new);

  struct Point {
    double base_mean;  // current mean at y
    double gain;       // weight on (z - current mean at x_new)
    double variance;   // augmented variance at y
  };

  Point at(const Eigen::VectorXd& y) const;

  double mean(const Point& p, double z) const {
    return p.base_mean + p.gain * (z - mean_at_new_);
  }

  double mean_at_new() const { return mean_at_new_; }
  double variance_at_new() const { return var_at_new_; }

 private:
  const KrigingModel& model_;
  Eigen::VectorXd x_new_;
  Eigen::VectorXd w_new_;  // bordered-system solution at x_new
  double mean_at_new_ = 0.0;
  double var_at_new_ = 0.0;
};

AugmentedPredictor augment(const KrigingModel& model,
                           const Eigen::VectorXd& x_new);

// Posterior mean/variance over a fixed batch of points, with the
// bordered-system solutions cached column-wise so posterior covariances
// between batch points cost one dot product each. Used by the criteria
// scans, where the same batch is revisited for every candidate.
class BatchPredictor {
 public:
  // k_cross, if given, is the precomputed points.rows() x n matrix of
  // covariances k(points_j, x_i) against the design; otherwise it is built.
  BatchPredictor(const KrigingModel& model, const Eigen::MatrixXd& points,
                 const Eigen::MatrixXd* k_cross = nullptr);

  const KrigingModel& model() const { return *model_; }
  int size() const { return static_cast<int>(points_->rows()); }

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& variance() const { return variance_; }
  const Eigen::VectorXd& sd() const { return sd_; }

  // Posterior covariance between batch points j and k.
  double posterior_cov(int j, int k) const;

  // Posterior covariance block rows x cols.
  Eigen::MatrixXd posterior_cov(const std::vector<int>& rows,
                                const std::vector<int>& cols) const;

 private:
  const KrigingModel* model_;
  const Eigen::MatrixXd* points_;
  Eigen::MatrixXd rhs_;  // (n + l) x m
  Eigen::MatrixXd sol_;  // (n + l) x m
  Eigen::VectorXd mean_, variance_, sd_;
};

}  // namespace gpfail
