#include "gpfail/kriging.hpp"

#include <cmath>
#include <sstream>

#include "gpfail/errors.hpp"

namespace gpfail {

namespace {

Eigen::MatrixXd bordered_matrix(const Design& design, const TrendSpec& trend,
                                const CovarianceSpec& cov, double nugget) {
  const int n = design.size();
  const int l = trend.size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + l, n + l);
  for (int i = 0; i < n; ++i) {
    B(i, i) = cov.variance + nugget;
    for (int j = i + 1; j < n; ++j) {
      const double k = covariance(design.points.row(i).transpose(),
                                  design.points.row(j).transpose(), cov);
      B(i, j) = k;
      B(j, i) = k;
    }
  }
  const Eigen::MatrixXd H = trend.at_points(design.points);
  B.block(n, 0, l, n) = H;
  B.block(0, n, n, l) = H.transpose();
  return B;
}

bool acceptably_conditioned(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  return dmax > 0.0 && std::isfinite(dmax) && dmin / dmax > 1e-14;
}

}  // namespace

KrigingModel fit(const Design& design, const TrendSpec& trend,
                 const CovarianceSpec& cov, double nugget_rel) {
  cov.validate();
  design.validate(design.default_separation_tol());
  if (design.dim() != cov.dim()) {
    throw ConfigError("fit: design dimension does not match covariance spec");
  }
  const int n = design.size();
  const int l = trend.size();
  if (n < l) {
    throw ConfigError("fit: need at least as many observations as trend basis functions");
  }
  if (nugget_rel < 0.0) throw ConfigError("fit: negative nugget");

  KrigingModel model;
  model.design_ = design;
  model.trend_ = trend;
  model.cov_ = cov;

  double rel = nugget_rel;
  const double rel_cap = 1e-4;
  while (true) {
    const double nugget = rel * cov.variance;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(
        bordered_matrix(design, trend, cov, nugget));
    if (acceptably_conditioned(lu)) {
      model.lu_ = std::move(lu);
      model.nugget_ = nugget;
      return model;
    }
    if (rel >= rel_cap) break;
    rel = (rel == 0.0) ? 1e-8 : rel * 10.0;
    if (rel > rel_cap) rel = rel_cap;
  }
  std::ostringstream msg;
  msg << "fit: bordered system is numerically singular for n=" << n
      << ", d=" << design.dim() << " even with nugget " << rel_cap
      << " * variance; first design point: "
      << design.points.row(0);
  throw NumericalError(msg.str());
}

Eigen::VectorXd KrigingModel::rhs_at(const Eigen::VectorXd& x) const {
  const int nn = n();
  Eigen::VectorXd r(nn + l());
  for (int i = 0; i < nn; ++i) {
    r[i] = covariance(x, design_.points.row(i).transpose(), cov_);
  }
  r.tail(l()) = trend_.at(x);
  return r;
}

Eigen::VectorXd KrigingModel::solve(const Eigen::VectorXd& rhs) const {
  return lu_.solve(rhs);
}

Eigen::MatrixXd KrigingModel::solve(const Eigen::MatrixXd& rhs) const {
  return lu_.solve(rhs);
}

double KrigingModel::clamp_variance(double v) const {
  if (v < 0.0) {
    clamp_count_->fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return v;
}

Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = rhs_at(x);
  const Eigen::VectorXd w = lu_.solve(r);
  Prediction out;
  out.mean = w.head(n()).dot(design_.values);
  out.variance = clamp_variance(cov_.variance - w.dot(r));
  return out;
}

double KrigingModel::posterior_covariance(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) const {
  const Eigen::VectorXd wx = lu_.solve(rhs_at(x));
  return covariance(x, y, cov_) - wx.dot(rhs_at(y));
}

AugmentedPredictor::AugmentedPredictor(const KrigingModel& model,
                                       const Eigen::VectorXd& x_new)
    : model_(model), x_new_(x_new) {
  const double tol = model.design().default_separation_tol();
  for (int i = 0; i < model.n(); ++i) {
    if ((model.design().points.row(i).transpose() - x_new).norm() <= tol) {
      throw ConfigError("augment: new point coincides with design point " +
                        std::to_string(i));
    }
  }
  const Eigen::VectorXd r = model.rhs_at(x_new);
  w_new_ = model.solve(r);
  mean_at_new_ = w_new_.head(model.n()).dot(model.design().values);
  var_at_new_ = model.cov().variance - w_new_.dot(r);
  if (!(var_at_new_ > 1e-12 * model.cov().variance)) {
    throw ConfigError(
        "augment: predictive variance at the new point is numerically zero");
  }
}

AugmentedPredictor::Point AugmentedPredictor::at(
    const Eigen::VectorXd& y) const {
  const Eigen::VectorXd ry = model_.rhs_at(y);
  const Eigen::VectorXd wy = model_.solve(ry);
  Point p;
  p.base_mean = wy.head(model_.n()).dot(model_.design().values);
  const double var_y = model_.cov().variance - wy.dot(ry);
  const double cross = covariance(y, x_new_, model_.cov()) - w_new_.dot(ry);
  p.gain = cross / var_at_new_;
  double v = var_y - cross * cross / var_at_new_;
  p.variance = (v > 0.0) ? v : 0.0;
  return p;
}

AugmentedPredictor augment(const KrigingModel& model,
                           const Eigen::VectorXd& x_new) {
  return AugmentedPredictor(model, x_new);
}

BatchPredictor::BatchPredictor(const KrigingModel& model,
                               const Eigen::MatrixXd& points,
                               const Eigen::MatrixXd* k_cross)
    : model_(&model), points_(&points) {
  const int m = static_cast<int>(points.rows());
  const int n = model.n();
  const int l = model.l();
  rhs_.resize(n + l, m);
  if (k_cross != nullptr) {
    if (k_cross->rows() != m || k_cross->cols() != n) {
      throw ConfigError("BatchPredictor: k_cross has wrong shape");
    }
    rhs_.topRows(n) = k_cross->transpose();
  } else {
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd y = points.row(j).transpose();
      for (int i = 0; i < n; ++i) {
        rhs_(i, j) =
            covariance(y, model.design().points.row(i).transpose(), model.cov());
      }
    }
  }
  rhs_.bottomRows(l) = model.trend().at_points(points);
  sol_ = model.solve(rhs_);
  mean_ = sol_.topRows(n).transpose() * model.design().values;
  variance_ = (-(sol_.cwiseProduct(rhs_).colwise().sum().transpose().array()) +
               model.cov().variance)
                  .matrix();
  variance_ = variance_.cwiseMax(0.0);
  sd_ = variance_.cwiseSqrt();
}

double BatchPredictor::posterior_cov(int j, int k) const {
  const double kjk = covariance(points_->row(j).transpose(),
                                points_->row(k).transpose(), model_->cov());
  return kjk - sol_.col(j).dot(rhs_.col(k));
}

Eigen::MatrixXd BatchPredictor::posterior_cov(
    const std::vector<int>& rows, const std::vector<int>& cols) const {
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(cols.size());
  const int dim = static_cast<int>(rhs_.rows());
  Eigen::MatrixXd sol_rows(dim, nr), rhs_cols(dim, nc);
  for (int a = 0; a < nr; ++a) sol_rows.col(a) = sol_.col(rows[a]);
  for (int b = 0; b < nc; ++b) rhs_cols.col(b) = rhs_.col(cols[b]);
  Eigen::MatrixXd out = -(sol_rows.transpose() * rhs_cols);
  for (int a = 0; a < nr; ++a) {
    const Eigen::VectorXd ya = points_->row(rows[a]).transpose();
    for (int b = 0; b < nc; ++b) {
      out(a, b) +=
          covariance(ya, points_->row(cols[b]).transpose(), model_->cov());
    }
  }
  return out;
}

}  // namespace gpfail
