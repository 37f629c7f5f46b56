#include "gpfail/mc_sample.hpp"

#include <cmath>

#include "gpfail/errors.hpp"
#include "gpfail/rng.hpp"

namespace gpfail {

void Box::validate() const {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    throw ConfigError("Box: lo/hi must be non-empty and the same length");
  }
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw ConfigError("Box: need finite lo < hi on every axis");
    }
  }
}

Box Box::unit(int dim) {
  Box b;
  b.lo = Eigen::VectorXd::Zero(dim);
  b.hi = Eigen::VectorXd::Ones(dim);
  return b;
}

Box Box::symmetric(double half_width, int dim) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, -half_width);
  b.hi = Eigen::VectorXd::Constant(dim, half_width);
  return b;
}

InputLaw InputLaw::uniform(const Box& box) {
  InputLaw law;
  law.kind = Kind::UniformBox;
  law.box = box;
  return law;
}

InputLaw InputLaw::normal(const Eigen::VectorXd& mean,
                          const Eigen::VectorXd& sd) {
  InputLaw law;
  law.kind = Kind::IndependentNormal;
  law.mean = mean;
  law.sd = sd;
  return law;
}

int InputLaw::dim() const {
  return kind == Kind::UniformBox ? box.dim() : static_cast<int>(mean.size());
}

void InputLaw::validate() const {
  if (kind == Kind::UniformBox) {
    box.validate();
    return;
  }
  if (mean.size() == 0 || mean.size() != sd.size()) {
    throw ConfigError("InputLaw: mean/sd must be non-empty and the same length");
  }
  for (int i = 0; i < sd.size(); ++i) {
    if (!(sd[i] > 0.0) || !std::isfinite(sd[i]) || !std::isfinite(mean[i])) {
      throw ConfigError("InputLaw: need finite mean and positive sd");
    }
  }
}

MCSample draw_mc_sample(const InputLaw& law, int m, std::uint64_t seed) {
  law.validate();
  if (m < 1) throw ConfigError("draw_mc_sample: m must be >= 1");
  const int d = law.dim();
  MCSample sample;
  sample.seed = seed;
  sample.law = law;
  sample.points.resize(m, d);
  Rng rng(seed);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < d; ++i) {
      if (law.kind == InputLaw::Kind::UniformBox) {
        sample.points(j, i) = rng.uniform(law.box.lo[i], law.box.hi[i]);
      } else {
        sample.points(j, i) = law.mean[i] + law.sd[i] * rng.normal();
      }
    }
  }
  return sample;
}

}  // namespace gpfail
