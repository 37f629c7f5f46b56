#include "gpfail/design.hpp"

#include <cmath>
#include <sstream>

#include "gpfail/errors.hpp"

namespace gpfail {

void Design::validate(double separation_tol) const {
  if (points.rows() != values.size()) {
    throw ConfigError("Design: points.rows() != values.length");
  }
  if (points.rows() == 0 || points.cols() == 0) {
    throw ConfigError("Design: empty design");
  }
  if (!points.allFinite() || !values.allFinite()) {
    throw ConfigError("Design: non-finite entries");
  }
  for (int i = 0; i < points.rows(); ++i) {
    for (int j = i + 1; j < points.rows(); ++j) {
      if ((points.row(i) - points.row(j)).norm() <= separation_tol) {
        std::ostringstream msg;
        msg << "Design: points " << i << " and " << j
            << " coincide within separation tolerance " << separation_tol;
        throw ConfigError(msg.str());
      }
    }
  }
}

double Design::default_separation_tol() const {
  double diameter = 0.0;
  for (int i = 0; i < points.rows(); ++i) {
    for (int j = i + 1; j < points.rows(); ++j) {
      diameter = std::max(diameter, (points.row(i) - points.row(j)).norm());
    }
  }
  return 1e-9 * diameter;
}

Design Design::with_point(const Eigen::VectorXd& x, double z) const {
  Design out;
  out.points.resize(points.rows() + 1, points.cols());
  out.points.topRows(points.rows()) = points;
  out.points.row(points.rows()) = x.transpose();
  out.values.resize(values.size() + 1);
  out.values.head(values.size()) = values;
  out.values[values.size()] = z;
  return out;
}

}  // namespace gpfail
