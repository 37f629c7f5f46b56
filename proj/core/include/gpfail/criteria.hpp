#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gpfail/kriging.hpp"
#include "gpfail/mc_sample.hpp"
#include "gpfail/posterior.hpp"
#include "gpfail/quadrature.hpp"

namespace gpfail {

// Sampling criterion selection. All criteria are exposed as
// "smaller is better"; the two maximized families (RB, ECH) are negated
// inside select_next.
struct CriterionConfig {
  enum class Kind { Sur, Timse, Rb, Ech, Maximin };

  Kind kind = Kind::Sur;
  int variant = 1;             // Sur: 1..4
  int q_nodes = 12;            // Sur: quadrature size
  int m0 = 500;                // Sur/Timse: pruning size, 0 = no pruning
  double sigma_eps_sq = 1e-6;  // Timse
  double kappa = 2.0;          // Rb
  int delta = 1;               // Rb: 1 or 2
  // When set, pruning restricts only the candidate search; the integrand
  // sum still runs over the whole sample.
  bool prune_candidates_only = false;

  void validate(int sample_size) const;
  std::string describe() const;
};

struct SelectionResult {
  int chosen_index = -1;             // index into the MC sample
  std::vector<int> searched_indices;
  Eigen::VectorXd scores;            // aligned with searched_indices
};

// Expected-reduction factor shared by the Ranjan/Bichon family:
// E[max(0, kappa^delta - |q + U|^delta)] with U standard normal and
// q = normal_quantile(p), in closed form. Requires 0 < p < 1.
double g_closed(double p, double kappa, int delta);

// sigma^delta * g_closed(p) per sample point; maximized.
Eigen::VectorXd j_rb(const PosteriorSummary& summary, double kappa, int delta);

// Misclassification probability tau per sample point; maximized.
Eigen::VectorXd j_ech(const PosteriorSummary& summary);

// Weighted average of the one-point-augmented predictive variance over
// the integrand set, the weight being a Gaussian bump of width
// sqrt(sigma_eps_sq + sd^2) centered on the threshold and frozen at the
// current model state. Minimized. Candidates whose augmentation is
// degenerate receive +infinity.
Eigen::VectorXd j_timse(const BatchPredictor& batch,
                        const PosteriorSummary& summary, double sigma_eps_sq,
                        const std::vector<int>& candidates,
                        const std::vector<int>& integrand);
Eigen::VectorXd j_timse(const KrigingModel& model, const MCSample& sample,
                        const PosteriorSummary& summary, double sigma_eps_sq,
                        const std::vector<int>& candidates,
                        const std::vector<int>& integrand = {});

// One-step lookahead uncertainty criteria. For each candidate the
// predictive law of the unknown observation is quantized on the given
// rule; the integrand is the post-augmentation misclassification
// probability tau (variants 1, 3) or nu = p(1-p) (variants 2, 4).
// Variants 1 and 2 square the integrand average at each quadrature node
// before taking the node-weighted sum; variants 3 and 4 aggregate
// linearly. Minimized.
Eigen::VectorXd j_sur(const BatchPredictor& batch,
                      const PosteriorSummary& summary, int variant,
                      const QuadratureRule& rule,
                      const std::vector<int>& candidates,
                      const std::vector<int>& integrand);
Eigen::VectorXd j_sur(const KrigingModel& model, const MCSample& sample,
                      const PosteriorSummary& summary, int variant,
                      const QuadratureRule& rule,
                      const std::vector<int>& candidates,
                      const std::vector<int>& integrand = {});

// Indices of the m0 largest tau values, ties broken by lowest index.
// m0 <= 0 or m0 >= m returns all indices.
std::vector<int> prune(const PosteriorSummary& summary, int m0);

// Unevaluated sample index farthest (in minimum distance) from the design.
int maximin_next(const Eigen::MatrixXd& design_points, const MCSample& sample,
                 const std::vector<char>& evaluated);

// Applies pruning, dispatches to the configured criterion and returns the
// argmin over the searched set, ties broken by lowest index. Sample
// indices flagged in `evaluated` are never returned. When `evaluated` is
// empty it is reconstructed by matching sample points against design
// points. `batch`, if given, must be a BatchPredictor over sample.points
// for `model`.
SelectionResult select_next(const CriterionConfig& config,
                            const KrigingModel& model, const MCSample& sample,
                            const PosteriorSummary& summary,
                            const std::vector<char>& evaluated = {},
                            const BatchPredictor* batch = nullptr);

}  // namespace gpfail
