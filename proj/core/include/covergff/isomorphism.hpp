#pragma once

#include <cstdint>
#include <vector>

#include "covergff/network.hpp"

namespace covergff {

/// Statistical thresholds shared by the distribution-identity checks.
/// The identities are exact, so failures at these levels indicate bugs;
/// the levels are tuned for a sub-1% false alarm rate over the full suite.
struct IsomorphismThresholds {
  double ks_p = 0.001;        // per-vertex two-sample KS level (Bonferroni)
  double moment_sigmas = 5.0; // mean/variance gaps, in combined stderrs
  double mean_lt_sigmas = 4.0;  // E L^x = t check
  double laplace_sigmas = 4.0;  // Laplace-functional agreement
};

/// Verdict container comparing {L^x_{tau(t)} + eta_x^2/2} (walk and field
/// independent) against {(eta_x + sqrt(2t))^2/2} per vertex.
struct TwoSampleReport {
  double t = 0.0;
  std::size_t sample_count = 0;

  struct VertexRow {
    int vertex = 0;
    double ks_statistic = 0.0;
    double ks_p = 1.0;
    double lhs_mean = 0.0;
    double rhs_mean = 0.0;
    double predicted_mean = 0.0;  // t + R_eff(root, x)/2
    double mean_gap_sigmas = 0.0;
    double lhs_var = 0.0;
    double rhs_var = 0.0;
    double predicted_var = 0.0;  // 2 t R + R^2 / 2
    double var_gap_sigmas = 0.0;
    double local_time_mean = 0.0;   // should be t
    double local_time_sigmas = 0.0;
    bool pass = true;
  };
  std::vector<VertexRow> rows;

  struct LaplaceRow {
    int vertex = 0;
    double lambda = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap_sigmas = 0.0;
    bool pass = true;
  };
  std::vector<LaplaceRow> laplace_rows;

  bool pass = true;
};

TwoSampleReport ray_knight_two_sample(
    const Network& net, double t, std::size_t sample_count,
    std::uint64_t seed, const IsomorphismThresholds& thresholds = {});

/// Laplace-transform check of sum_{i<=N} Y_i + X^2/2 (N Poisson(ell),
/// Y exponential) against (X + sqrt(2 ell))^2/2; the closed form is
/// (1+lambda)^{-1/2} exp(-lambda ell / (1+lambda)).
struct BabyIsoReport {
  double ell = 0.0;
  std::size_t sample_count = 0;
  struct Row {
    double lambda = 0.0;
    double closed_form = 0.0;
    double lhs_empirical = 0.0;
    double lhs_stderr = 0.0;
    double rhs_empirical = 0.0;
    double rhs_stderr = 0.0;
    bool pass = true;
  };
  std::vector<Row> rows;
  bool pass = true;
};

BabyIsoReport baby_iso_check(double ell, const std::vector<double>& lambdas,
                             std::size_t sample_count, std::uint64_t seed,
                             double tolerance_sigmas = 4.0);

/// Stochastic domination sqrt(sum Y_i) <= max(X + sqrt(2 ell), 0)/sqrt(2)
/// on an x-grid, plus a sweep confirming the quantile coupling itself
/// never violates the order.
struct DominationReport {
  double ell = 0.0;
  std::size_t sample_count = 0;
  struct Row {
    double x = 0.0;
    double lhs_tail = 0.0;
    double rhs_tail = 0.0;
    double slack = 0.0;  // 4 combined stderrs
    bool pass = true;
  };
  std::vector<Row> rows;
  std::size_t quantile_grid_points = 0;
  std::size_t quantile_violations = 0;
  bool pass = true;
};

DominationReport domination_check(double ell, std::size_t sample_count,
                                  std::uint64_t seed,
                                  std::size_t grid_points = 200);

/// Tail bound for weighted squares of a correlated Gaussian vector (the
/// field on `net`): P(sum_v a_v eta_v^2 >= lambda A sigma^2) <= 2 e^{-lambda/4}.
struct GaussianSquareTailReport {
  std::size_t sample_count = 0;
  double sigma_sq = 0.0;
  double weight_total = 0.0;
  struct Row {
    double lambda = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    double stderr_emp = 0.0;
    bool pass = true;
  };
  std::vector<Row> rows;
  bool pass = true;
};

GaussianSquareTailReport gaussian_square_tail_check(
    const Network& net, const std::vector<double>& weights,
    const std::vector<double>& lambdas, std::size_t sample_count,
    std::uint64_t seed);

}  // namespace covergff
