#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "covergff/isomorphism.hpp"
#include "covergff/network.hpp"
#include "covergff/rng.hpp"
#include "covergff/stats.hpp"
#include "covergff/walk.hpp"

using namespace covergff;

TEST_CASE("ray-knight two-sample on the single edge") {
  const Network net = load_network("0 1 1.0");
  const auto report = ray_knight_two_sample(net, 1.0, 30000, 2024);
  CHECK(report.pass);
  REQUIRE(report.rows.size() == 2);
  // Per-vertex mean is t + R_eff/2 on both sides.
  for (const auto& row : report.rows) {
    CHECK(std::abs(row.lhs_mean - row.predicted_mean) <
          0.05 * row.predicted_mean + 0.05);
    CHECK(std::abs(row.rhs_mean - row.predicted_mean) <
          0.05 * row.predicted_mean + 0.05);
  }
  // Root row is the degenerate constant t.
  CHECK(report.rows[0].lhs_var == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.rows[0].ks_p == doctest::Approx(1.0));
}

TEST_CASE("ray-knight near the degenerate t -> 0 limit") {
  const Network net = make_path(3);
  const auto report = ray_knight_two_sample(net, 1e-9, 4000, 11);
  CHECK(report.pass);
}

TEST_CASE("ray-knight catches a broken walk (negative control)") {
  // Same machinery, wrong t on one side: the test must reject.
  const Network net = load_network("0 1 1.0");
  const std::size_t count = 30000;
  std::vector<double> lhs(count);
  std::vector<double> rhs(count);
  const double t = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    Rng a = Rng::derive(9, 0, i);
    const auto trace = simulate_to_inverse_local_time(net, t, a);
    Rng b = Rng::derive(9, 1, i);
    const double eta = b.normal();
    lhs[i] = trace.local_times[1] + 0.5 * eta * eta;
    Rng c = Rng::derive(9, 2, i);
    const double eta2 = c.normal() + std::sqrt(2.0 * (t + 0.15));
    rhs[i] = 0.5 * eta2 * eta2;
  }
  CHECK(ks_test_two_sample(lhs, rhs).p_value < 0.001);
}

TEST_CASE("baby isomorphism closed forms") {
  // ell = 0, lambda = 1: 1/sqrt(2).
  const auto at_zero = baby_iso_check(0.0, {1.0}, 50000, 1);
  CHECK(at_zero.pass);
  CHECK(at_zero.rows[0].closed_form ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // ell = 1, lambda = 1: e^{-1/2}/sqrt(2) ~ 0.428882.
  const auto at_one = baby_iso_check(1.0, {1.0}, 50000, 2);
  CHECK(at_one.pass);
  CHECK(at_one.rows[0].closed_form ==
        doctest::Approx(0.42888194248035344).epsilon(1e-12));

  const auto grid = baby_iso_check(4.0, {0.5, 1.0, 2.0}, 50000, 3);
  CHECK(grid.pass);
  for (const auto& row : grid.rows) {
    CHECK(std::abs(row.lhs_empirical - row.rhs_empirical) <
          5.0 * (row.lhs_stderr + row.rhs_stderr));
  }
}

TEST_CASE("stochastic domination on the x-grid, including ell = 0") {
  for (double ell : {0.0, 0.5, 1.0, 4.0}) {
    const auto report = domination_check(ell, 200000, 77);
    CHECK(report.pass);
    CHECK(report.quantile_violations == 0);
    REQUIRE(report.rows.size() == 200);
    // At x = 0+ the atom sits on the left side: tails must separate.
    CHECK(report.rows[0].lhs_tail <= 1.0);
  }
}

TEST_CASE("gaussian square tail bound") {
  // Single standard normal: net is an edge, weight on the non-root vertex.
  const Network edge = load_network("0 1 1.0");
  const auto single = gaussian_square_tail_check(edge, {0.0, 1.0},
                                                 {0.0, 1.0, 4.0}, 100000, 5);
  CHECK(single.pass);
  CHECK(single.rows[0].bound == doctest::Approx(2.0));
  // lambda = 4: true tail P(X^2 >= 4) ~ 0.0455 far below 2 e^{-1}.
  CHECK(single.rows[2].empirical ==
        doctest::Approx(0.04550026389635842).epsilon(0.08));
  CHECK(single.rows[2].bound == doctest::Approx(2.0 * std::exp(-1.0)));

  // Correlated vector: field on a path, weights = degrees.
  const Network path = make_path(6);
  std::vector<double> degrees;
  for (int v = 0; v < 6; ++v) {
    degrees.push_back(static_cast<double>(path.degree(v)));
  }
  const auto correlated = gaussian_square_tail_check(
      path, degrees, {0.5, 1.0, 2.0, 4.0, 8.0}, 100000, 6);
  CHECK(correlated.pass);
}

TEST_CASE("threshold config rejects bad inputs") {
  CHECK_THROWS_AS(ray_knight_two_sample(make_path(2), 0.0, 100, 1),
                  NetworkError);
  CHECK_THROWS_AS(baby_iso_check(-1.0, {1.0}, 100, 1), NetworkError);
  CHECK_THROWS_AS(
      gaussian_square_tail_check(make_path(2), {1.0}, {1.0}, 10, 1),
      NetworkError);
}
