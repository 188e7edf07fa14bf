#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covergff/gff.hpp"
#include "covergff/network.hpp"

namespace covergff {

inline constexpr int kReportSchemaVersion = 1;

/// Configuration for `covergff experiment`; loaded from a JSON document.
struct ExperimentConfig {
  std::string suite = "smoke";
  std::string graph_path;  // optional; suites generate their own families
  int root = 0;
  std::uint64_t seed = 1;
  std::size_t gff_samples = 100000;
  std::size_t walk_runs = 2000;
  std::vector<double> t_values{0.5, 2.0};
  double epsilon = 0.5;
  std::string output_dir = "covergff-out";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

struct CoverEstimateOptions {
  std::size_t gff_samples = 10000;
  std::size_t cover_runs = 0;  // 0 skips the simulation comparison
  int start = -1;              // cover-simulation start; -1 means the root
  double epsilon = 0.1;        // gate epsilon
  std::uint64_t seed = 1;
};

/// The estimator pipeline: |E| (E sup eta)^2, a delta-method confidence
/// interval, the exact maximal hitting time, and the hitting-vs-cover
/// gate with the unknown universal constant pinned to 1 (heuristic).
struct CoverEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_sup = 0.0;
  double sup_stderr = 0.0;
  int edge_count = 0;
  int max_degree = 0;
  double t_hit_exact = 0.0;
  double gate_ratio = 0.0;      // t_hit / estimate
  double gate_threshold = 0.0;  // eps^4 / (1e4 Delta^2) (C pinned to 1)
  bool gate_pass = false;
  bool gate_heuristic = true;

  bool simulated = false;
  std::size_t sim_runs = 0;
  double sim_mean_cover = 0.0;
  double sim_sd_cover = 0.0;
  double sim_stderr = 0.0;
  double ratio = 0.0;             // sim_mean_cover / estimate
  bool dlp_upper_sanity = false;  // sim_mean_cover <= 2 * estimate
};

CoverEstimate estimate_cover_time(const Network& net,
                                  const CoverEstimateOptions& options);

/// Cover-time dispersion along a graph family: sd/mean falls as the
/// hitting-to-cover ratio falls.
struct AldousReport {
  std::size_t runs = 0;
  struct Row {
    std::string label;
    double mean_cover = 0.0;
    double sd_cover = 0.0;
    double dispersion = 0.0;           // sd / mean
    double estimate = 0.0;             // |E| (E sup)^2 as the t_cov proxy
    double t_hit = 0.0;
    double hit_cover_sqrt = 0.0;       // sqrt(t_hit / estimate)
    /// P(|tau - estimate| >= lambda sqrt(estimate * t_hit)).
    std::vector<double> normalized_tails;
  };
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0};
  std::vector<Row> rows;
  bool dispersion_strictly_decreasing = true;
};

AldousReport aldous_concentration_experiment(
    const std::vector<Network>& family, const std::vector<std::string>& labels,
    std::size_t runs, std::size_t gff_samples, std::uint64_t seed);

/// Runs a named suite, writing CSV data, JSON verdicts, and a manifest
/// under config.output_dir. CSV/JSON outputs are byte-deterministic for a
/// fixed config and seed; the manifest additionally records wall time.
struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteCheck> checks;
  std::vector<std::string> files_written;
  bool pass = true;
  double wall_seconds = 0.0;
};

SuiteResult run_experiment(const ExperimentConfig& config);

/// "u v c" float formatting used everywhere a file leaves the process.
std::string format_double(double value);

/// Minimal CSV writer: header plus rows of 17-significant-digit floats.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace covergff
