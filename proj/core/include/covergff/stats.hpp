#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace covergff {

class Rng;

/// Streaming mean/variance accumulator (Welford).
class MeanVar {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double stddev() const;
  /// Standard error of the mean.
  double stderr_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double normal_pdf(double x);
double normal_cdf(double x);
/// Inverse standard normal CDF (Wichura's AS 241, double precision).
double normal_quantile(double p);

/// P(sup_t |B(t)| > z) for the Brownian bridge: the Kolmogorov tail Q(z).
double kolmogorov_tail(double z);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS against a CDF; samples need not be sorted.
KsResult ks_test_one_sample(std::span<const double> samples,
                            const std::function<double(double)>& cdf);

/// Two-sample KS with the asymptotic Kolmogorov p-value.
KsResult ks_test_two_sample(std::span<const double> a,
                            std::span<const double> b);

double sample_median(std::vector<double> values);
double sample_quantile(std::vector<double> values, double q);

/// Bootstrap standard error of the median (resamples with replacement).
double bootstrap_median_stderr(std::span<const double> values, int resamples,
                               Rng& rng);

/// sqrt(p(1-p)/n) with p clamped away from the degenerate endpoints.
double binomial_stderr(double p_hat, std::size_t n);

/// Standard error of the sample variance via the fourth central moment.
double variance_stderr(std::span<const double> values);

}  // namespace covergff
