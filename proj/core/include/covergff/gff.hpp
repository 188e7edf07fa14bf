#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "covergff/network.hpp"
#include "covergff/rng.hpp"
#include "covergff/spectral.hpp"

namespace covergff {

/// One realization of the field pinned to zero at the root.
struct GffSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// Reusable sampler. The dense backend multiplies the Cholesky factor of
/// the pinned covariance by i.i.d. normals; the tree backend walks the
/// tree adding independent unit-normal edge increments. Both produce the
/// same law (the tree backend requires unit conductances).
class GffSampler {
 public:
  enum class Backend { kDense, kTree };

  /// Tree backend when the network is a unit-conductance tree, else dense.
  explicit GffSampler(const Network& net);
  GffSampler(const Network& net, Backend backend);

  Backend backend() const { return backend_; }
  int vertex_count() const { return n_; }
  int root() const { return root_; }

  void sample_into(Rng& rng, std::vector<double>& out) const;
  std::vector<double> sample(Rng& rng) const;

  /// Pinned variances R_eff(root, v) per vertex.
  const std::vector<double>& variance_diagonal() const { return diag_; }
  double sigma_max() const { return sigma_max_; }

 private:
  int n_ = 0;
  int root_ = 0;
  Backend backend_ = Backend::kDense;
  Eigen::MatrixXd factor_;           // dense backend
  std::vector<int> bfs_order_;       // tree backend
  std::vector<int> parent_;          // tree backend
  std::vector<double> diag_;
  double sigma_max_ = 0.0;
};

/// Draws factor * z with z i.i.d. standard normal; values[root] = 0.
GffSample sample_gff(const Network& net, std::uint64_t seed);

/// Sums independent standard normal edge increments from the root.
/// Requires a unit-conductance tree.
GffSample sample_gff_tree(const Network& net, std::uint64_t seed);

/// Conditional law of the field at v given its values on S (which must
/// contain the root and not v): a Gaussian whose mean mixes the boundary
/// values with the walk's hitting probabilities and whose variance is
/// R_eff(v, S).
struct ConditionalLaw {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<int> support;      // vertices of S with positive weight
  std::vector<double> weights;   // hitting probabilities, sum to 1
};

ConditionalLaw conditional_law(const Network& net, int v,
                               const std::vector<int>& boundary,
                               const std::vector<double>& boundary_values);

struct SupStatistics {
  double mean_sup = 0.0;
  double median_sup = 0.0;
  double stderr_mean = 0.0;
  double median_stderr = 0.0;  // bootstrap, 200 resamples
  double sigma_max = 0.0;      // max_v sqrt(R_eff(root, v))
  std::size_t sample_count = 0;
  /// Fraction of samples with |sup - mean| > 5 sigma_max; Gaussian
  /// concentration makes anything above 1e-4 suspicious.
  double concentration_violation_rate = 0.0;
  bool concentration_ok = true;
};

/// Empirical mean/median of sup_v eta_v. Requires sample_count >= 100.
SupStatistics estimate_sup(const Network& net, std::size_t sample_count,
                           std::uint64_t seed);

/// Detection-window experiment: how often some vertex lands in the tiny
/// window above the median m of the sup, where the window width shrinks
/// with the field values on the neighborhood.
struct DetectionReport {
  double epsilon = 0.0;
  int max_degree = 0;
  std::size_t sample_count = 0;
  double median_estimate = 0.0;
  double median_stderr = 0.0;
  /// Window eta_v in [m, m + eps*(1 ^ Delta/sum_u |m - eta_u|)].
  double empirical_probability = 0.0;
  double empirical_stderr = 0.0;
  double bound = 0.0;  // eps / 10^Delta at the median
  bool pass = false;   // empirical >= bound - 4 stderr
  /// Same event with window width 2*eps, reported against the
  /// general-threshold bound 2*eps/10^Delta * P(sup >= m).
  double empirical_probability_wide = 0.0;
  double bound_general = 0.0;
  double sup_tail_probability = 0.0;  // empirical P(sup >= m)
};

DetectionReport detection_experiment(const Network& net, double epsilon,
                                     std::size_t sample_count,
                                     std::uint64_t seed);

/// Gaussian overshoot window bound: for X ~ N(-mu, sigma^2), mu >= 0 and
/// 0 <= eps <= 1,  P(0 <= X <= eps (sigma ^ sigma^2/mu)) >= eps/5 P(X >= 0).
/// Returns (lhs, rhs) evaluated by the normal CDF.
struct OvershootCheck {
  double window_probability = 0.0;
  double bound = 0.0;
  bool holds = false;
};
OvershootCheck overshoot_window_check(double mu, double sigma, double eps);

}  // namespace covergff
