#include "covergff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covergff/rng.hpp"

namespace covergff {

double MeanVar::stddev() const { return std::sqrt(variance()); }

double MeanVar::stderr_mean() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double normal_pdf(double x) {
  return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double normal_quantile(double p) {
  // AS 241 algorithm PPND16 (Wichura 1988).
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must be in (0,1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double kolmogorov_tail(double z) {
  if (z < 1e-9) return 1.0;
  if (z < 1.18) {
    // Theta-function form converges fast for small z.
    const double t = std::exp(-1.2337005501361697 / (z * z));
    const double p = 2.5066282746310002 / z *
                     (t + std::pow(t, 9.0) + std::pow(t, 25.0) +
                      std::pow(t, 49.0));
    return 1.0 - p;
  }
  const double t = std::exp(-2.0 * z * z);
  double tail = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 8; ++k) {
    const double term = std::pow(t, static_cast<double>(k) * k);
    tail += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * tail, 0.0, 1.0);
}

namespace {

double ks_p_from_statistic(double d, double n_eff) {
  const double sn = std::sqrt(n_eff);
  return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace

KsResult ks_test_one_sample(std::span<const double> samples,
                            const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return {d, ks_p_from_statistic(d, n)};
}

KsResult ks_test_two_sample(std::span<const double> a,
                            std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double diff = 0.0;
  double d = 0.0;
  while (ia < sa.size() && ib < sb.size()) {
    const double x = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] == x) {
      diff += 1.0 / na;
      ++ia;
    }
    while (ib < sb.size() && sb[ib] == x) {
      diff -= 1.0 / nb;
      ++ib;
    }
    d = std::max(d, std::abs(diff));
  }
  const double n_eff = na * nb / (na + nb);
  return {d, ks_p_from_statistic(d, n_eff)};
}

double sample_median(std::vector<double> values) {
  return sample_quantile(std::move(values), 0.5);
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double bootstrap_median_stderr(std::span<const double> values, int resamples,
                               Rng& rng) {
  MeanVar acc;
  std::vector<double> draw(values.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& x : draw) {
      x = values[rng.uniform_int(values.size())];
    }
    acc.add(sample_median(draw));
  }
  return acc.stddev();
}

double binomial_stderr(double p_hat, std::size_t n) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  const double p = std::clamp(p_hat, 1.0 / nd, 1.0 - 1.0 / nd);
  return std::sqrt(p * (1.0 - p) / nd);
}

double variance_stderr(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  MeanVar acc;
  for (double v : values) acc.add(v);
  const double mean = acc.mean();
  const double s2 = acc.variance();
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m4 += d * d * d * d;
  }
  m4 /= static_cast<double>(n);
  const double var_of_s2 = (m4 - s2 * s2) / static_cast<double>(n);
  return var_of_s2 > 0.0 ? std::sqrt(var_of_s2) : 0.0;
}

}  // namespace covergff
