#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "covergff/rng.hpp"
#include "covergff/stats.hpp"

using namespace covergff;

TEST_CASE("normal cdf and quantile invert each other") {
  for (double p : {1e-8, 1e-4, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
    const double x = normal_quantile(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
}

TEST_CASE("kolmogorov tail reference values") {
  // Q(z) = 2 sum (-1)^{k-1} exp(-2 k^2 z^2), evaluated directly here as an
  // independent check of the two-branch implementation.
  auto direct = [](double z) {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
      s += (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * z * z);
    }
    return 2.0 * s;
  };
  for (double z : {0.5, 0.8, 1.0, 1.2, 1.5, 2.0}) {
    CHECK(kolmogorov_tail(z) == doctest::Approx(direct(z)).epsilon(1e-9));
  }
  CHECK(kolmogorov_tail(1e-12) == doctest::Approx(1.0));
}

TEST_CASE("two-sample KS accepts identical laws and rejects shifted ones") {
  Rng rng(7);
  std::vector<double> a(20000);
  std::vector<double> b(20000);
  std::vector<double> shifted(20000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    shifted[i] = rng.normal() + 0.1;
  }
  CHECK(ks_test_two_sample(a, b).p_value > 0.001);
  CHECK(ks_test_two_sample(a, shifted).p_value < 1e-6);
}

TEST_CASE("one-sample KS against the true CDF") {
  Rng rng(11);
  std::vector<double> u(50000);
  for (auto& x : u) x = rng.uniform();
  auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_test_one_sample(u, uniform_cdf).p_value > 0.001);
  auto wrong_cdf = [](double x) {
    return std::clamp(x * x, 0.0, 1.0);
  };
  CHECK(ks_test_one_sample(u, wrong_cdf).p_value < 1e-9);
}

TEST_CASE("rng moments: normal, exponential, poisson, gamma") {
  Rng rng(42);
  MeanVar norm;
  MeanVar expo;
  MeanVar poi_small;
  MeanVar poi_large;
  MeanVar gam;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    norm.add(rng.normal());
    expo.add(rng.exponential());
    poi_small.add(static_cast<double>(rng.poisson(3.0)));
    poi_large.add(static_cast<double>(rng.poisson(120.0)));
    gam.add(rng.gamma(5.0));
  }
  CHECK(std::abs(norm.mean()) < 4.0 * norm.stderr_mean());
  CHECK(norm.variance() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(expo.mean() - 1.0) < 4.0 * expo.stderr_mean());
  CHECK(std::abs(poi_small.mean() - 3.0) < 4.0 * poi_small.stderr_mean());
  CHECK(poi_small.variance() == doctest::Approx(3.0).epsilon(0.03));
  CHECK(std::abs(poi_large.mean() - 120.0) < 4.0 * poi_large.stderr_mean());
  CHECK(poi_large.variance() == doctest::Approx(120.0).epsilon(0.03));
  CHECK(std::abs(gam.mean() - 5.0) < 4.0 * gam.stderr_mean());
  CHECK(gam.variance() == doctest::Approx(5.0).epsilon(0.03));
}

TEST_CASE("derived streams are reproducible and distinct") {
  Rng a = Rng::derive(123, 4, 5);
  Rng b = Rng::derive(123, 4, 5);
  Rng c = Rng::derive(123, 4, 6);
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  bool any_diff = false;
  Rng a2 = Rng::derive(123, 4, 5);
  for (int i = 0; i < 16; ++i) {
    if (a2.next_u64() != c.next_u64()) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("poisson sampler matches its pmf (chi-square-ish bound)") {
  Rng rng(99);
  const double mean = 14.0;
  const int n = 200000;
  std::vector<int> counts(60, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.poisson(mean);
    if (k < counts.size()) ++counts[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 5; k <= 28; ++k) {
    const double p = std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                              std::lgamma(static_cast<double>(k) + 1.0));
    const double observed = static_cast<double>(counts[k]) / n;
    CHECK(std::abs(observed - p) < 5.0 * binomial_stderr(p, n) + 1e-4);
  }
}

TEST_CASE("median and quantile helpers") {
  std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
  CHECK(sample_median(v) == doctest::Approx(3.0));
  CHECK(sample_quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(sample_quantile(v, 1.0) == doctest::Approx(5.0));
  Rng rng(5);
  std::vector<double> normals(4000);
  for (auto& x : normals) x = rng.normal();
  const double se = bootstrap_median_stderr(normals, 200, rng);
  // Median of n normals has stderr ~ sqrt(pi/(2n)).
  const double expected = std::sqrt(3.14159265358979 / 2.0 / 4000.0);
  CHECK(se == doctest::Approx(expected).epsilon(0.25));
}
