#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace gpfail {

// Axis-aligned box domain.
struct Box {
  Eigen::VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double width(int axis) const { return hi[axis] - lo[axis]; }
  void validate() const;

  static Box unit(int dim);
  static Box symmetric(double half_width, int dim);
};

// Input distribution P_X: either uniform on a box or independent normals.
struct InputLaw {
  enum class Kind { UniformBox, IndependentNormal };

  Kind kind = Kind::UniformBox;
  Box box;                   // UniformBox
  Eigen::VectorXd mean, sd;  // IndependentNormal

  static InputLaw uniform(const Box& box);
  static InputLaw normal(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& sd);

  int dim() const;
  void validate() const;
};

// Fixed Monte Carlo sample Y_1..Y_m, i.i.d. from the tagged law.
// Redrawing with the same seed is bit-identical.
struct MCSample {
  Eigen::MatrixXd points;  // m x d
  std::uint64_t seed = 0;
  InputLaw law;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

MCSample draw_mc_sample(const InputLaw& law, int m, std::uint64_t seed);

}  // namespace gpfail
