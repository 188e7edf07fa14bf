#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "covergff/network.hpp"
#include "covergff/rng.hpp"
#include "covergff/stats.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"
#include "support/test_oracles.hpp"

using namespace covergff;

TEST_CASE("compound Poisson-exponential CDF basics") {
  const CompoundPoissonExponential law(1.0);
  CHECK(law.cdf(-0.5) == 0.0);
  CHECK(law.cdf(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(law.cdf(1e9) == doctest::Approx(1.0));
  CHECK_FALSE(law.normal_approximated());

  const CompoundPoissonExponential zero(0.0);
  CHECK(zero.cdf(0.0) == 1.0);
  CHECK(zero.cdf(3.0) == 1.0);
  CHECK(zero.quantile(0.999999) == 0.0);

  CHECK_THROWS_AS(CompoundPoissonExponential(-1.0), NetworkError);
}

TEST_CASE("CDF against a direct Monte Carlo oracle") {
  const double ell = 1.0;
  const CompoundPoissonExponential law(ell);
  Rng rng(41);
  const std::size_t runs = 1000000;
  std::size_t below = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    const std::uint64_t n = rng.poisson(ell);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) sum += rng.exponential();
    below += sum <= 1.0;
  }
  const double observed = static_cast<double>(below) / runs;
  CHECK(std::abs(observed - law.cdf(1.0)) <=
        4.0 * binomial_stderr(law.cdf(1.0), runs));
}

TEST_CASE("CDF series agrees with high-precision quadrature of the "
          "mixture") {
  // Independent evaluation: sum_k pois_k * P(k, x) with P computed by
  // direct numerical integration of the Gamma density.
  const double ell = 2.5;
  const double x = 3.2;
  double expected = std::exp(-ell);
  double pois = std::exp(-ell);
  for (int k = 1; k <= 60; ++k) {
    pois *= ell / k;
    // integrate t^{k-1} e^{-t} / (k-1)! over [0, x]
    const int steps = 20001;
    const double h = x / (steps - 1);
    double integral = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double t = h * i;
      const double weight = (i == 0 || i == steps - 1) ? 0.5 : 1.0;
      integral += weight * std::exp((k - 1) * std::log(std::max(t, 1e-300)) -
                                    t - std::lgamma(k));
    }
    expected += pois * integral * h;
  }
  const CompoundPoissonExponential law(ell);
  CHECK(law.cdf(x) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("CDF monotonicity grid: nondecreasing in x, nonincreasing in ell") {
  std::vector<double> ells{0.1, 0.5, 1.0, 2.0, 5.0, 20.0};
  std::vector<double> xs;
  for (int i = 0; i <= 60; ++i) xs.push_back(0.25 * i);
  for (double ell : ells) {
    const CompoundPoissonExponential law(ell);
    double previous = -1.0;
    for (double x : xs) {
      const double value = law.cdf(x);
      CHECK(value >= previous - 1e-14);
      previous = value;
    }
  }
  for (std::size_t e = 1; e < ells.size(); ++e) {
    const CompoundPoissonExponential smaller(ells[e - 1]);
    const CompoundPoissonExponential larger(ells[e]);
    for (double x : xs) {
      if (x <= 0.0) continue;
      CHECK(larger.cdf(x) <= smaller.cdf(x) + 1e-12);
    }
  }
}

TEST_CASE("quantile inverts the CDF and respects the atom") {
  const CompoundPoissonExponential law(1.5);
  for (double u : {0.05, 0.3, 0.6, 0.9, 0.99}) {
    const double q = law.quantile(u);
    if (q == 0.0) {
      CHECK(u <= law.cdf(0.0));
    } else {
      CHECK(law.cdf(q) == doctest::Approx(u).epsilon(1e-6));
    }
  }
  CHECK(law.quantile(std::exp(-1.5) * 0.999) == 0.0);
}

TEST_CASE("normal-approximated regime stays coherent") {
  const CompoundPoissonExponential law(800.0);
  CHECK(law.normal_approximated());
  CHECK(law.cdf(800.0) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(law.cdf(400.0) < 1e-6);
  CHECK(law.cdf(1200.0) > 1.0 - 1e-6);
  const double q = law.quantile(0.5);
  CHECK(q == doctest::Approx(800.0).epsilon(0.01));
}

TEST_CASE("recursive sampler: zeros at t=0, tower means, dry subtrees") {
  const Network path = make_path(3);
  const auto zeros = recursive_local_time_sampler(path, 0.0, 42ULL);
  CHECK(zeros.ell == std::vector<double>{0.0, 0.0, 0.0});

  MeanVar leaf;
  std::size_t dry_violations = 0;
  for (std::size_t i = 0; i < 50000; ++i) {
    Rng rng = Rng::derive(43, i);
    const auto field = recursive_local_time_sampler(path, 1.0, rng);
    leaf.add(field.ell[2]);
    if (field.ell[1] == 0.0 && field.ell[2] != 0.0) ++dry_violations;
  }
  CHECK(dry_violations == 0);
  // E ell[2] = t by the tower property.
  CHECK(std::abs(leaf.mean() - 1.0) <= 4.0 * leaf.stderr_mean());

  CHECK_THROWS_AS(recursive_local_time_sampler(make_cycle(3), 1.0, 1ULL),
                  NetworkError);
}

TEST_CASE("recursive sampler matches the walk on the single edge and on a "
          "random tree") {
  const double t = 1.0;
  for (auto [n, seed] : std::vector<std::pair<int, std::uint64_t>>{
           {2, 61}, {12, 62}}) {
    const Network tree = n == 2 ? make_path(2) : make_random_tree(n, seed);
    const std::size_t count = 10000;
    std::vector<std::vector<double>> recursive(
        static_cast<std::size_t>(tree.vertex_count()),
        std::vector<double>(count));
    std::vector<std::vector<double>> walked(
        static_cast<std::size_t>(tree.vertex_count()),
        std::vector<double>(count));
    for (std::size_t i = 0; i < count; ++i) {
      Rng a = Rng::derive(seed, 1, i);
      const auto field = recursive_local_time_sampler(tree, t, a);
      Rng b = Rng::derive(seed, 2, i);
      const auto trace = simulate_to_inverse_local_time(tree, t, b);
      for (int v = 0; v < tree.vertex_count(); ++v) {
        recursive[static_cast<std::size_t>(v)][i] =
            field.ell[static_cast<std::size_t>(v)];
        walked[static_cast<std::size_t>(v)][i] =
            trace.local_times[static_cast<std::size_t>(v)];
      }
    }
    for (int v = 0; v < tree.vertex_count(); ++v) {
      if (v == tree.root()) continue;
      const auto ks =
          ks_test_two_sample(recursive[static_cast<std::size_t>(v)],
                             walked[static_cast<std::size_t>(v)]);
      CHECK(ks.p_value >= 0.001);
    }
  }
}

TEST_CASE("coupled sampler: domination always, marginals exact") {
  const Network tree = make_random_tree(20, 71);
  const double t = 1.0;
  const std::size_t count = 4000;
  const int probe = 11;
  std::size_t violations = 0;
  std::vector<double> ell_coupled(count);
  std::vector<double> eta_coupled(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = Rng::derive(72, i);
    const auto sample = coupled_sampler(tree, t, rng);
    if (!domination_holds(tree, t, sample)) ++violations;
    ell_coupled[i] = sample.local_times.ell[probe];
    eta_coupled[i] = sample.field[probe];
  }
  CHECK(violations == 0);

  std::vector<double> ell_ind(count);
  std::vector<double> eta_ind(count);
  const GffSampler sampler(tree, GffSampler::Backend::kTree);
  std::vector<double> field;
  for (std::size_t i = 0; i < count; ++i) {
    Rng a = Rng::derive(73, i);
    ell_ind[i] = recursive_local_time_sampler(tree, t, a).ell[probe];
    Rng b = Rng::derive(74, i);
    sampler.sample_into(b, field);
    eta_ind[i] = field[probe];
  }
  CHECK(ks_test_two_sample(ell_coupled, ell_ind).p_value >= 0.001);
  CHECK(ks_test_two_sample(eta_coupled, eta_ind).p_value >= 0.001);
}

TEST_CASE("coupled sampler: root boundary equality") {
  const Network edge = make_path(2);
  Rng rng(75);
  const auto sample = coupled_sampler(edge, 2.0, rng);
  CHECK(sample.local_times.ell[0] == 2.0);
  CHECK(sample.field[0] == 0.0);
}

TEST_CASE("tree concentration experiment: tails behave") {
  const Network tree = make_binary_tree(6);
  const auto report = tree_concentration_experiment(tree, 1500, 81, 3000);
  CHECK(report.tails_nonincreasing);
  CHECK(report.tree_diameter == doctest::Approx(12.0));
  CHECK(report.predicted_cover > 0.0);
  // Cover mean should be within a factor of the prediction at this scale.
  CHECK(report.mean_cover / report.predicted_cover > 0.8);
  CHECK(report.mean_cover / report.predicted_cover < 2.2);
  if (report.fitted_points >= 2) CHECK(report.fitted_log_slope < 0.0);

  // Star: concentration is weak; only the coupon-collector reference is
  // reported against the simulated mean.
  const Network star = make_star(3);
  const auto star_report = tree_concentration_experiment(star, 4000, 82, 500);
  const double coupon = test_support::star_cover_from_center(3);
  CHECK(std::abs(star_report.mean_cover - coupon) / coupon < 0.1);

  CHECK_THROWS_AS(tree_concentration_experiment(make_cycle(4), 10, 1, 500),
                  NetworkError);
}
