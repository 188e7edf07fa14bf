#include "covergff/isomorphism.hpp"

#include <algorithm>
#include <cmath>

#include "covergff/gff.hpp"
#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"

namespace covergff {

TwoSampleReport ray_knight_two_sample(const Network& net, double t,
                                      std::size_t sample_count,
                                      std::uint64_t seed,
                                      const IsomorphismThresholds& thresholds) {
  if (!(t > 0.0)) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "t must be positive");
  }
  const auto n = static_cast<std::size_t>(net.vertex_count());
  const GffSampler sampler(net);
  const double shift = std::sqrt(2.0 * t);

  std::vector<std::vector<double>> lhs(n, std::vector<double>(sample_count));
  std::vector<std::vector<double>> rhs(n, std::vector<double>(sample_count));
  std::vector<MeanVar> local_time_acc(n);
  std::vector<double> field;

  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng walk_rng = Rng::derive(seed, 0, i);
    const WalkTrace trace = simulate_to_inverse_local_time(net, t, walk_rng);
    Rng gff_rng = Rng::derive(seed, 1, i);
    sampler.sample_into(gff_rng, field);
    for (std::size_t v = 0; v < n; ++v) {
      lhs[v][i] = trace.local_times[v] + 0.5 * field[v] * field[v];
      local_time_acc[v].add(trace.local_times[v]);
    }
    Rng rhs_rng = Rng::derive(seed, 2, i);
    sampler.sample_into(rhs_rng, field);
    for (std::size_t v = 0; v < n; ++v) {
      // Expanded form of (eta + sqrt(2t))^2 / 2: the constant term is
      // exactly t, so the pinned root matches the left side bit for bit.
      rhs[v][i] = 0.5 * field[v] * field[v] + field[v] * shift + t;
    }
  }

  TwoSampleReport report;
  report.t = t;
  report.sample_count = sample_count;
  const auto& diag = sampler.variance_diagonal();

  for (std::size_t v = 0; v < n; ++v) {
    TwoSampleReport::VertexRow row;
    row.vertex = static_cast<int>(v);
    const auto ks = ks_test_two_sample(lhs[v], rhs[v]);
    row.ks_statistic = ks.statistic;
    row.ks_p = ks.p_value;

    MeanVar lhs_acc;
    MeanVar rhs_acc;
    for (double x : lhs[v]) lhs_acc.add(x);
    for (double x : rhs[v]) rhs_acc.add(x);
    row.lhs_mean = lhs_acc.mean();
    row.rhs_mean = rhs_acc.mean();
    const double resistance = diag[v];
    row.predicted_mean = t + 0.5 * resistance;
    const double mean_se = std::sqrt(lhs_acc.stderr_mean() * lhs_acc.stderr_mean() +
                                     rhs_acc.stderr_mean() * rhs_acc.stderr_mean());
    row.mean_gap_sigmas =
        mean_se > 0.0 ? std::abs(row.lhs_mean - row.rhs_mean) / mean_se : 0.0;

    row.lhs_var = lhs_acc.variance();
    row.rhs_var = rhs_acc.variance();
    row.predicted_var = 2.0 * t * resistance + 0.5 * resistance * resistance;
    const double lhs_var_se = variance_stderr(lhs[v]);
    if (lhs_var_se > 0.0) {
      row.var_gap_sigmas = std::abs(row.lhs_var - row.predicted_var) / lhs_var_se;
    }

    row.local_time_mean = local_time_acc[v].mean();
    const double lt_se = local_time_acc[v].stderr_mean();
    row.local_time_sigmas =
        lt_se > 0.0 ? std::abs(row.local_time_mean - t) / lt_se : 0.0;

    row.pass = row.ks_p >= thresholds.ks_p &&
               row.mean_gap_sigmas <= thresholds.moment_sigmas &&
               row.var_gap_sigmas <= thresholds.moment_sigmas &&
               row.local_time_sigmas <= thresholds.mean_lt_sigmas;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);

    for (double lambda : {0.5, 1.0}) {
      TwoSampleReport::LaplaceRow lrow;
      lrow.vertex = static_cast<int>(v);
      lrow.lambda = lambda;
      MeanVar le;
      MeanVar re;
      for (double x : lhs[v]) le.add(std::exp(-lambda * x));
      for (double x : rhs[v]) re.add(std::exp(-lambda * x));
      lrow.lhs = le.mean();
      lrow.rhs = re.mean();
      const double se = std::sqrt(le.stderr_mean() * le.stderr_mean() +
                                  re.stderr_mean() * re.stderr_mean());
      lrow.gap_sigmas = se > 0.0 ? std::abs(lrow.lhs - lrow.rhs) / se : 0.0;
      lrow.pass = lrow.gap_sigmas <= thresholds.laplace_sigmas;
      report.pass = report.pass && lrow.pass;
      report.laplace_rows.push_back(lrow);
    }
  }
  return report;
}

BabyIsoReport baby_iso_check(double ell, const std::vector<double>& lambdas,
                             std::size_t sample_count, std::uint64_t seed,
                             double tolerance_sigmas) {
  if (ell < 0.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "ell must be nonnegative");
  }
  BabyIsoReport report;
  report.ell = ell;
  report.sample_count = sample_count;

  std::vector<double> lhs(sample_count);
  std::vector<double> rhs(sample_count);
  const double shift = std::sqrt(2.0 * ell);
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng = Rng::derive(seed, 0, i);
    const std::uint64_t n = rng.poisson(ell);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) sum += rng.exponential();
    const double x = rng.normal();
    lhs[i] = sum + 0.5 * x * x;
    const double y = rng.normal() + shift;
    rhs[i] = 0.5 * y * y;
  }

  for (double lambda : lambdas) {
    BabyIsoReport::Row row;
    row.lambda = lambda;
    row.closed_form = std::exp(-lambda * ell / (1.0 + lambda)) /
                      std::sqrt(1.0 + lambda);
    MeanVar le;
    MeanVar re;
    for (double x : lhs) le.add(std::exp(-lambda * x));
    for (double x : rhs) re.add(std::exp(-lambda * x));
    row.lhs_empirical = le.mean();
    row.lhs_stderr = le.stderr_mean();
    row.rhs_empirical = re.mean();
    row.rhs_stderr = re.stderr_mean();
    row.pass =
        std::abs(row.lhs_empirical - row.closed_form) <=
            tolerance_sigmas * row.lhs_stderr &&
        std::abs(row.rhs_empirical - row.closed_form) <=
            tolerance_sigmas * row.rhs_stderr;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

DominationReport domination_check(double ell, std::size_t sample_count,
                                  std::uint64_t seed,
                                  std::size_t grid_points) {
  DominationReport report;
  report.ell = ell;
  report.sample_count = sample_count;
  const double shift = std::sqrt(2.0 * ell);

  std::vector<double> lhs(sample_count);
  std::vector<double> rhs(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng = Rng::derive(seed, 0, i);
    const std::uint64_t n = rng.poisson(ell);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) sum += rng.exponential();
    lhs[i] = std::sqrt(sum);
    rhs[i] = std::max(rng.normal() + shift, 0.0) / std::sqrt(2.0);
  }
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  const double x_max = std::max(rhs.back(), lhs.back());

  auto tail = [](const std::vector<double>& sorted, double x) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(sorted.end() - it) /
           static_cast<double>(sorted.size());
  };

  for (std::size_t g = 0; g < grid_points; ++g) {
    DominationReport::Row row;
    row.x = x_max * static_cast<double>(g) /
            static_cast<double>(grid_points - 1);
    row.lhs_tail = tail(lhs, row.x);
    row.rhs_tail = tail(rhs, row.x);
    row.slack = 4.0 * std::sqrt(
                          binomial_stderr(row.lhs_tail, sample_count) *
                              binomial_stderr(row.lhs_tail, sample_count) +
                          binomial_stderr(row.rhs_tail, sample_count) *
                              binomial_stderr(row.rhs_tail, sample_count));
    row.pass = row.lhs_tail <= row.rhs_tail + row.slack;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }

  // Quantile-coupling order: the compound law's quantile never exceeds
  // the dominating transform of the same uniform.
  const CompoundPoissonExponential law(ell);
  report.quantile_grid_points = 2001;
  for (std::size_t g = 1; g < 2000; ++g) {
    const double u = static_cast<double>(g) / 2000.0;
    const double a = law.quantile(u);
    const double b = std::max(normal_quantile(u) + shift, 0.0);
    if (a > 0.5 * b * b) ++report.quantile_violations;
  }
  report.pass = report.pass && report.quantile_violations == 0;
  return report;
}

GaussianSquareTailReport gaussian_square_tail_check(
    const Network& net, const std::vector<double>& weights,
    const std::vector<double>& lambdas, std::size_t sample_count,
    std::uint64_t seed) {
  if (weights.size() != static_cast<std::size_t>(net.vertex_count())) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "one weight per vertex required");
  }
  const GffSampler sampler(net);
  GaussianSquareTailReport report;
  report.sample_count = sample_count;
  report.sigma_sq = sampler.sigma_max() * sampler.sigma_max();
  for (double a : weights) {
    if (a < 0.0) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "weights must be nonnegative");
    }
    report.weight_total += a;
  }

  std::vector<double> sums(sample_count);
  std::vector<double> field;
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng = Rng::derive(seed, 0, i);
    sampler.sample_into(rng, field);
    double s = 0.0;
    for (std::size_t v = 0; v < field.size(); ++v) {
      s += weights[v] * field[v] * field[v];
    }
    sums[i] = s;
  }
  std::sort(sums.begin(), sums.end());

  for (double lambda : lambdas) {
    GaussianSquareTailReport::Row row;
    row.lambda = lambda;
    const double threshold = lambda * report.weight_total * report.sigma_sq;
    const auto it = std::lower_bound(sums.begin(), sums.end(), threshold);
    row.empirical = static_cast<double>(sums.end() - it) /
                    static_cast<double>(sample_count);
    row.bound = 2.0 * std::exp(-lambda / 4.0);
    row.stderr_emp = binomial_stderr(row.empirical, sample_count);
    row.pass = row.empirical <= row.bound + 4.0 * row.stderr_emp;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace covergff
