#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "covergff/experiments.hpp"
#include "covergff/network.hpp"

using namespace covergff;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

}  // namespace

TEST_CASE("cover estimate on the single edge: closed form and gate") {
  const Network edge = load_network("0 1 1.0");
  CoverEstimateOptions options;
  options.gff_samples = 50000;
  options.cover_runs = 20000;
  options.seed = 811;
  const auto estimate = estimate_cover_time(edge, options);
  // |E| (E max(0, N))^2 = 1/(2 pi).
  const double expected = 1.0 / (2.0 * 3.14159265358979323846);
  CHECK(std::abs(estimate.estimate - expected) < 0.01);
  CHECK(estimate.ci_low < estimate.estimate);
  CHECK(estimate.ci_high > estimate.estimate);
  CHECK(estimate.t_hit_exact == doctest::Approx(1.0));
  // Hitting and cover times have the same order here: the gate must fail.
  CHECK_FALSE(estimate.gate_pass);
  CHECK(estimate.gate_heuristic);
  CHECK(std::abs(estimate.sim_mean_cover - 1.0) < 0.05);
  CHECK_FALSE(estimate.dlp_upper_sanity);  // 1 > 2 * 0.159
  CHECK(estimate.ratio == doctest::Approx(2.0 * 3.14159265358979323846)
                              .epsilon(0.1));
}

TEST_CASE("cover estimate: line negative control at reduced size") {
  const Network line = make_path(60, 0);
  CoverEstimateOptions options;
  options.gff_samples = 4000;
  options.cover_runs = 600;
  options.start = 30;
  options.seed = 812;
  const auto estimate = estimate_cover_time(line, options);
  const double target = 5.0 * 3.14159265358979323846 / 8.0;
  CHECK(estimate.ratio > 0.8 * target);
  CHECK(estimate.ratio < 1.25 * target);
}

TEST_CASE("aldous experiment report structure") {
  std::vector<Network> family{make_binary_tree(3), make_binary_tree(5)};
  std::vector<std::string> labels{"d3", "d5"};
  const auto report =
      aldous_concentration_experiment(family, labels, 400, 1500, 813);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.mean_cover > 0.0);
    CHECK(row.dispersion > 0.0);
    CHECK(row.t_hit > 0.0);
    REQUIRE(row.normalized_tails.size() == report.lambdas.size());
    for (std::size_t i = 1; i < row.normalized_tails.size(); ++i) {
      CHECK(row.normalized_tails[i] <= row.normalized_tails[i - 1] + 1e-12);
    }
  }
  CHECK(report.rows[1].hit_cover_sqrt < report.rows[0].hit_cover_sqrt);
}

TEST_CASE("experiment config parsing") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "suite": "ray-knight",
    "seed": 99,
    "gff_samples": 1234,
    "t_values": [0.5],
    "epsilon": 0.25,
    "output_dir": "cfg-out"
  })");
  CHECK(config.suite == "ray-knight");
  CHECK(config.seed == 99);
  CHECK(config.gff_samples == 1234);
  CHECK(config.t_values == std::vector<double>{0.5});
  CHECK(config.epsilon == 0.25);
  CHECK_THROWS(ExperimentConfig::from_json_text("{\"gff_samples\": 0}"));
  CHECK_THROWS(ExperimentConfig::from_json_text("not json"));
}

TEST_CASE("unknown suite is rejected") {
  ExperimentConfig config;
  config.suite = "no-such-suite";
  config.output_dir = "unknown-suite-out";
  CHECK_THROWS_AS(run_experiment(config), NetworkError);
}

TEST_CASE("mini suite runs, passes, and is byte-deterministic") {
  ExperimentConfig config;
  config.suite = "mini";
  config.seed = 31415;
  config.output_dir = "mini-out-a";
  const auto first = run_experiment(config);
  CHECK(first.pass);
  CHECK(!first.checks.empty());
  CHECK(std::filesystem::exists("mini-out-a/summary.json"));
  CHECK(std::filesystem::exists("mini-out-a/manifest.json"));

  config.output_dir = "mini-out-b";
  const auto second = run_experiment(config);
  CHECK(second.pass);

  // Identical config+seed must give identical CSV/JSON data files (the
  // manifest additionally records wall time, so it is excluded).
  for (const auto& entry :
       std::filesystem::directory_iterator("mini-out-a")) {
    const auto name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    CHECK(slurp("mini-out-a/" + name) == slurp("mini-out-b/" + name));
  }
}

TEST_CASE("gate threshold follows eps^4 / (1e4 Delta^2) with C pinned to 1") {
  const Network edge = load_network("0 1 1.0");
  CoverEstimateOptions options;
  options.gff_samples = 2000;
  options.epsilon = 0.1;
  options.seed = 5;
  const auto estimate = estimate_cover_time(edge, options);
  CHECK(estimate.gate_threshold == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(estimate.gate_ratio ==
        doctest::Approx(estimate.t_hit_exact / estimate.estimate));

  const Network star = make_star(4);  // max degree 4
  CoverEstimateOptions star_options;
  star_options.gff_samples = 2000;
  star_options.epsilon = 0.5;
  star_options.seed = 6;
  const auto star_estimate = estimate_cover_time(star, star_options);
  CHECK(star_estimate.gate_threshold ==
        doctest::Approx(std::pow(0.5, 4) / (1e4 * 16.0)).epsilon(1e-12));
}

TEST_CASE("delta-method interval covers the exact value ~95% of the time") {
  // Single edge: the exact estimate target is |E| (E max(0, N))^2
  // = 1/(2 pi), so coverage can be measured against a closed form.
  const Network edge = load_network("0 1 1.0");
  const double truth = 1.0 / (2.0 * 3.14159265358979323846);
  int covered = 0;
  const int replications = 300;
  for (int r = 0; r < replications; ++r) {
    CoverEstimateOptions options;
    options.gff_samples = 2000;
    options.seed = 9000 + static_cast<std::uint64_t>(r);
    const auto estimate = estimate_cover_time(edge, options);
    if (truth >= estimate.ci_low && truth <= estimate.ci_high) ++covered;
  }
  const double coverage = static_cast<double>(covered) / replications;
  CHECK(coverage >= 0.90);
  CHECK(coverage <= 0.99);
}

TEST_CASE("csv writer uses 17 significant digits") {
  write_csv("fmt-check.csv", {"x"}, {{0.1}, {1.0 / 3.0}});
  const std::string body = slurp("fmt-check.csv");
  CHECK(body.find("0.10000000000000001") != std::string::npos);
  CHECK(body.find("0.33333333333333331") != std::string::npos);
}
