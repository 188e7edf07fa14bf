#pragma once

#include <cstdint>
#include <vector>

#include "covergff/gff.hpp"
#include "covergff/network.hpp"
#include "covergff/rng.hpp"

namespace covergff {

/// Law of Y_1 + ... + Y_N with N ~ Poisson(rate) and Y_i i.i.d. Exp(1):
/// the one-step conditional law of a child's local time on a tree given
/// its parent's local time equals `rate`. Mixed law with an atom
/// exp(-rate) at zero and Gamma(k, 1) components above it.
class CompoundPoissonExponential {
 public:
  explicit CompoundPoissonExponential(double rate);

  double rate() const { return rate_; }
  /// True when the Poisson mixture is evaluated through a normal
  /// approximation with continuity correction (rate > 700).
  bool normal_approximated() const { return normal_approx_; }

  /// CDF with absolute error <= 1e-12 (series truncated at Poisson tail
  /// mass 1e-14).
  double cdf(double x) const;

  /// Left-continuous generalized inverse by bisection to 1e-10; returns
  /// the lower bracket, so quantile-coupled pairs never overshoot the
  /// dominating variable.
  double quantile(double u) const;

  /// Direct draw: N ~ Poisson(rate), then Gamma(N, 1).
  double sample(Rng& rng) const;

 private:
  double rate_ = 0.0;
  bool normal_approx_ = false;
  std::vector<double> mixture_;  // weight of the Gamma(k,1) component, k>=1
  double atom_ = 1.0;            // P(sum = 0)
};

/// Per-vertex local-time values at the inverse local time; ell[root] = t.
struct LocalTimeField {
  std::vector<double> ell;
  double t = 0.0;
};

/// Samples the local-time field of a unit-conductance tree without
/// simulating the walk: in BFS order each vertex draws from the compound
/// Poisson-exponential law at its parent's value.
LocalTimeField recursive_local_time_sampler(const Network& tree, double t,
                                            Rng& rng);
LocalTimeField recursive_local_time_sampler(const Network& tree, double t,
                                            std::uint64_t seed);

/// Jointly samples (local times, field) on a unit tree so that every
/// vertex satisfies sqrt(ell_v) <= max((eta_v + sqrt(2t))/sqrt(2), 0)
/// pointwise while both marginals stay exact. Per vertex the shared
/// uniform drives the Gaussian increment through its quantile and the
/// local time through the compound law's quantile.
struct CoupledSample {
  LocalTimeField local_times;
  std::vector<double> field;
};

CoupledSample coupled_sampler(const Network& tree, double t, Rng& rng);
CoupledSample coupled_sampler(const Network& tree, double t,
                              std::uint64_t seed);

/// Does the coupled pair satisfy the pointwise domination at every vertex?
bool domination_holds(const Network& tree, double t,
                      const CoupledSample& sample);

/// Cover-time concentration experiment on a tree: simulate covers from
/// the root, compare |tau_cov - |E| (E sup eta)^2| tails at scale
/// |E| sqrt(R) E sup eta, fit the exponential tail slope, and report the
/// normalized deviations against sqrt(predicted * t_hit).
struct TreeConcentrationReport {
  std::size_t runs = 0;
  double mean_sup = 0.0;
  double sup_stderr = 0.0;
  double tree_diameter = 0.0;  // resistance diameter; edge count for trees
  double predicted_cover = 0.0;  // |E| mean_sup^2
  double mean_cover = 0.0;
  double sd_cover = 0.0;
  double t_hit = 0.0;  // exact max hitting time

  struct TailRow {
    double lambda = 0.0;
    double threshold = 0.0;
    double empirical = 0.0;
    double stderr_emp = 0.0;
    double normalized_threshold = 0.0;  // lambda sqrt(predicted t_hit)
    double normalized_empirical = 0.0;
  };
  std::vector<TailRow> tails;

  bool tails_nonincreasing = true;
  /// Least-squares slope of log(empirical tail) against lambda over the
  /// rows with positive mass; negative means exponential-looking decay.
  double fitted_log_slope = 0.0;
  std::size_t fitted_points = 0;
};

TreeConcentrationReport tree_concentration_experiment(
    const Network& tree, std::size_t runs, std::uint64_t seed,
    std::size_t sup_samples = 4000,
    const std::vector<double>& lambdas = {1.0, 2.0, 4.0, 8.0});

}  // namespace covergff
