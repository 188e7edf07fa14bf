#include "covergff/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

#include "covergff/eulerian.hpp"
#include "covergff/isomorphism.hpp"
#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"

namespace covergff {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "cannot open " + path + " for writing");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig config;
  config.suite = doc.value("suite", config.suite);
  config.graph_path = doc.value("graph_path", config.graph_path);
  config.root = doc.value("root", config.root);
  config.seed = doc.value("seed", config.seed);
  config.gff_samples = doc.value("gff_samples", config.gff_samples);
  config.walk_runs = doc.value("walk_runs", config.walk_runs);
  if (doc.contains("t_values")) {
    config.t_values = doc.at("t_values").get<std::vector<double>>();
  }
  config.epsilon = doc.value("epsilon", config.epsilon);
  config.output_dir = doc.value("output_dir", config.output_dir);
  if (config.gff_samples == 0 || config.t_values.empty()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "counts must be positive");
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "cannot open config " + path);
  }
  std::ostringstream body;
  body << in.rdbuf();
  return from_json_text(body.str());
}

CoverEstimate estimate_cover_time(const Network& net,
                                  const CoverEstimateOptions& options) {
  CoverEstimate result;
  const SupStatistics sup =
      estimate_sup(net, options.gff_samples, options.seed);
  result.mean_sup = sup.mean_sup;
  result.sup_stderr = sup.stderr_mean;
  result.edge_count = net.edge_count();
  result.max_degree = net.max_degree();
  const double edges = static_cast<double>(net.edge_count());
  result.estimate = edges * sup.mean_sup * sup.mean_sup;
  const double est_se = 2.0 * edges * sup.mean_sup * sup.stderr_mean;
  result.ci_low = result.estimate - 1.96 * est_se;
  result.ci_high = result.estimate + 1.96 * est_se;

  result.t_hit_exact = max_hitting_time(net);
  result.gate_ratio = result.t_hit_exact / result.estimate;
  const double delta = static_cast<double>(net.max_degree());
  result.gate_threshold = std::pow(options.epsilon, 4.0) /
                          (1e4 * delta * delta);  // C pinned to 1
  result.gate_pass = result.gate_ratio <= result.gate_threshold;

  if (options.cover_runs > 0) {
    result.simulated = true;
    result.sim_runs = options.cover_runs;
    const int start = options.start >= 0 ? options.start : net.root();
    MeanVar acc;
    for (std::size_t r = 0; r < options.cover_runs; ++r) {
      Rng rng = Rng::derive(options.seed, 3, r);
      acc.add(simulate_cover_time(net, start, rng).cover_time);
    }
    result.sim_mean_cover = acc.mean();
    result.sim_sd_cover = acc.stddev();
    result.sim_stderr = acc.stderr_mean();
    result.ratio = result.sim_mean_cover / result.estimate;
    result.dlp_upper_sanity = result.sim_mean_cover <= 2.0 * result.estimate;
  }
  return result;
}

AldousReport aldous_concentration_experiment(
    const std::vector<Network>& family, const std::vector<std::string>& labels,
    std::size_t runs, std::size_t gff_samples, std::uint64_t seed) {
  if (family.size() != labels.size()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "one label per network required");
  }
  AldousReport report;
  report.runs = runs;
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const Network& net = family[idx];
    AldousReport::Row row;
    row.label = labels[idx];

    const SupStatistics sup = estimate_sup(net, gff_samples, seed + idx);
    row.estimate = static_cast<double>(net.edge_count()) * sup.mean_sup *
                   sup.mean_sup;
    row.t_hit = max_hitting_time(net);
    row.hit_cover_sqrt = std::sqrt(row.t_hit / row.estimate);

    std::vector<double> covers(runs);
    MeanVar acc;
    for (std::size_t r = 0; r < runs; ++r) {
      Rng rng = Rng::derive(seed, 100 + idx, r);
      covers[r] = simulate_cover_time(net, net.root(), rng).cover_time;
      acc.add(covers[r]);
    }
    row.mean_cover = acc.mean();
    row.sd_cover = acc.stddev();
    row.dispersion = row.sd_cover / row.mean_cover;

    const double scale = std::sqrt(row.estimate * row.t_hit);
    for (double lambda : report.lambdas) {
      std::size_t hits = 0;
      for (double c : covers) {
        if (std::abs(c - row.estimate) >= lambda * scale) ++hits;
      }
      row.normalized_tails.push_back(static_cast<double>(hits) /
                                     static_cast<double>(runs));
    }
    report.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].dispersion >= report.rows[i - 1].dispersion) {
      report.dispersion_strictly_decreasing = false;
    }
  }
  return report;
}

namespace {

json to_json(const CoverEstimate& e) {
  return json{{"estimate", e.estimate},
              {"ci_low", e.ci_low},
              {"ci_high", e.ci_high},
              {"mean_sup", e.mean_sup},
              {"sup_stderr", e.sup_stderr},
              {"edge_count", e.edge_count},
              {"max_degree", e.max_degree},
              {"t_hit_exact", e.t_hit_exact},
              {"gate_ratio", e.gate_ratio},
              {"gate_threshold", e.gate_threshold},
              {"gate_pass", e.gate_pass},
              {"gate_heuristic", e.gate_heuristic},
              {"simulated", e.simulated},
              {"sim_runs", e.sim_runs},
              {"sim_mean_cover", e.sim_mean_cover},
              {"sim_sd_cover", e.sim_sd_cover},
              {"sim_stderr", e.sim_stderr},
              {"ratio", e.ratio},
              {"dlp_upper_sanity", e.dlp_upper_sanity}};
}

json to_json(const TwoSampleReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"vertex", row.vertex},
                    {"ks_statistic", row.ks_statistic},
                    {"ks_p", row.ks_p},
                    {"lhs_mean", row.lhs_mean},
                    {"rhs_mean", row.rhs_mean},
                    {"predicted_mean", row.predicted_mean},
                    {"mean_gap_sigmas", row.mean_gap_sigmas},
                    {"lhs_var", row.lhs_var},
                    {"rhs_var", row.rhs_var},
                    {"predicted_var", row.predicted_var},
                    {"var_gap_sigmas", row.var_gap_sigmas},
                    {"local_time_mean", row.local_time_mean},
                    {"local_time_sigmas", row.local_time_sigmas},
                    {"pass", row.pass}});
  }
  json laplace = json::array();
  for (const auto& row : r.laplace_rows) {
    laplace.push_back({{"vertex", row.vertex},
                       {"lambda", row.lambda},
                       {"lhs", row.lhs},
                       {"rhs", row.rhs},
                       {"gap_sigmas", row.gap_sigmas},
                       {"pass", row.pass}});
  }
  return json{{"t", r.t},
              {"sample_count", r.sample_count},
              {"rows", rows},
              {"laplace", laplace},
              {"pass", r.pass}};
}

json to_json(const BabyIsoReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"lambda", row.lambda},
                    {"closed_form", row.closed_form},
                    {"lhs_empirical", row.lhs_empirical},
                    {"lhs_stderr", row.lhs_stderr},
                    {"rhs_empirical", row.rhs_empirical},
                    {"rhs_stderr", row.rhs_stderr},
                    {"pass", row.pass}});
  }
  return json{{"ell", r.ell},
              {"sample_count", r.sample_count},
              {"rows", rows},
              {"pass", r.pass}};
}

json to_json(const DetectionReport& r) {
  return json{{"epsilon", r.epsilon},
              {"max_degree", r.max_degree},
              {"sample_count", r.sample_count},
              {"median_estimate", r.median_estimate},
              {"median_stderr", r.median_stderr},
              {"empirical_probability", r.empirical_probability},
              {"empirical_stderr", r.empirical_stderr},
              {"bound", r.bound},
              {"pass", r.pass},
              {"empirical_probability_wide", r.empirical_probability_wide},
              {"bound_general", r.bound_general},
              {"sup_tail_probability", r.sup_tail_probability}};
}

json to_json(const TreeConcentrationReport& r) {
  json tails = json::array();
  for (const auto& row : r.tails) {
    tails.push_back({{"lambda", row.lambda},
                     {"threshold", row.threshold},
                     {"empirical", row.empirical},
                     {"stderr", row.stderr_emp},
                     {"normalized_threshold", row.normalized_threshold},
                     {"normalized_empirical", row.normalized_empirical}});
  }
  return json{{"runs", r.runs},
              {"mean_sup", r.mean_sup},
              {"sup_stderr", r.sup_stderr},
              {"tree_diameter", r.tree_diameter},
              {"predicted_cover", r.predicted_cover},
              {"mean_cover", r.mean_cover},
              {"sd_cover", r.sd_cover},
              {"t_hit", r.t_hit},
              {"tails", tails},
              {"tails_nonincreasing", r.tails_nonincreasing},
              {"fitted_log_slope", r.fitted_log_slope},
              {"fitted_points", r.fitted_points}};
}

json to_json(const AldousReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"mean_cover", row.mean_cover},
                    {"sd_cover", row.sd_cover},
                    {"dispersion", row.dispersion},
                    {"estimate", row.estimate},
                    {"t_hit", row.t_hit},
                    {"hit_cover_sqrt", row.hit_cover_sqrt},
                    {"normalized_tails", row.normalized_tails}});
  }
  return json{{"runs", r.runs},
              {"lambdas", r.lambdas},
              {"rows", rows},
              {"dispersion_strictly_decreasing",
               r.dispersion_strictly_decreasing}};
}

class SuiteWriter {
 public:
  SuiteWriter(const ExperimentConfig& config, SuiteResult& result)
      : config_(config), result_(result) {
    std::filesystem::create_directories(config.output_dir);
  }

  void check(const std::string& name, bool pass, const std::string& detail) {
    result_.checks.push_back({name, pass, detail});
    result_.pass = result_.pass && pass;
  }

  void write_json(const std::string& name, const json& doc) {
    const std::string path = config_.output_dir + "/" + name;
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
    result_.files_written.push_back(path);
  }

  void write_rows(const std::string& name,
                  const std::vector<std::string>& header,
                  const std::vector<std::vector<double>>& rows) {
    const std::string path = config_.output_dir + "/" + name;
    write_csv(path, header, rows);
    result_.files_written.push_back(path);
  }

 private:
  const ExperimentConfig& config_;
  SuiteResult& result_;
};

void run_ray_knight_suite(const ExperimentConfig& config, SuiteWriter& writer,
                          std::size_t samples) {
  const std::vector<std::pair<std::string, Network>> nets{
      {"edge", make_path(2)},
      {"path5", make_path(5)},
      {"tree10", make_random_tree(10, config.seed ^ 0x9e37)},
  };
  json all = json::array();
  for (const auto& [label, net] : nets) {
    for (double t : config.t_values) {
      const auto report = ray_knight_two_sample(net, t, samples, config.seed);
      json doc = to_json(report);
      doc["net"] = label;
      all.push_back(doc);
      writer.check("ray_knight/" + label + "/t=" + format_double(t),
                   report.pass, "per-vertex KS and moment checks");
    }
  }
  writer.write_json("ray_knight.json", all);
}

void run_coupling_suite(const ExperimentConfig& config, SuiteWriter& writer,
                        std::size_t coupled_samples,
                        std::size_t marginal_samples) {
  const Network tree = make_random_tree(50, config.seed ^ 0x51);
  const double t = 1.0;
  std::size_t violations = 0;
  std::vector<double> ell_marginal(coupled_samples);
  std::vector<double> eta_marginal(coupled_samples);
  const int probe = tree.vertex_count() / 2;
  for (std::size_t i = 0; i < coupled_samples; ++i) {
    Rng rng = Rng::derive(config.seed, 7, i);
    const CoupledSample sample = coupled_sampler(tree, t, rng);
    if (!domination_holds(tree, t, sample)) ++violations;
    ell_marginal[i] =
        sample.local_times.ell[static_cast<std::size_t>(probe)];
    eta_marginal[i] = sample.field[static_cast<std::size_t>(probe)];
  }
  writer.check("coupling/pointwise_domination", violations == 0,
               std::to_string(violations) + " violations");

  std::vector<double> ell_independent(coupled_samples);
  std::vector<double> eta_independent(coupled_samples);
  const GffSampler tree_sampler(tree, GffSampler::Backend::kTree);
  std::vector<double> field;
  for (std::size_t i = 0; i < coupled_samples; ++i) {
    Rng rng = Rng::derive(config.seed, 8, i);
    ell_independent[i] = recursive_local_time_sampler(tree, t, rng)
                             .ell[static_cast<std::size_t>(probe)];
    Rng rng2 = Rng::derive(config.seed, 9, i);
    tree_sampler.sample_into(rng2, field);
    eta_independent[i] = field[static_cast<std::size_t>(probe)];
  }
  const auto ks_ell = ks_test_two_sample(ell_marginal, ell_independent);
  const auto ks_eta = ks_test_two_sample(eta_marginal, eta_independent);
  writer.check("coupling/ell_marginal", ks_ell.p_value >= 0.001,
               "KS p=" + format_double(ks_ell.p_value));
  writer.check("coupling/eta_marginal", ks_eta.p_value >= 0.001,
               "KS p=" + format_double(ks_eta.p_value));

  // Recursive sampler against the walk on a small tree.
  const Network small = make_random_tree(12, config.seed ^ 0x52);
  std::vector<std::vector<double>> recursive(
      static_cast<std::size_t>(small.vertex_count()),
      std::vector<double>(marginal_samples));
  std::vector<std::vector<double>> walked(
      static_cast<std::size_t>(small.vertex_count()),
      std::vector<double>(marginal_samples));
  for (std::size_t i = 0; i < marginal_samples; ++i) {
    Rng rng = Rng::derive(config.seed, 10, i);
    const auto field = recursive_local_time_sampler(small, t, rng);
    Rng rng2 = Rng::derive(config.seed, 11, i);
    const auto trace = simulate_to_inverse_local_time(small, t, rng2);
    for (int v = 0; v < small.vertex_count(); ++v) {
      recursive[static_cast<std::size_t>(v)][i] =
          field.ell[static_cast<std::size_t>(v)];
      walked[static_cast<std::size_t>(v)][i] =
          trace.local_times[static_cast<std::size_t>(v)];
    }
  }
  bool all_pass = true;
  double min_p = 1.0;
  for (int v = 0; v < small.vertex_count(); ++v) {
    if (v == small.root()) continue;
    const auto ks = ks_test_two_sample(recursive[static_cast<std::size_t>(v)],
                                       walked[static_cast<std::size_t>(v)]);
    min_p = std::min(min_p, ks.p_value);
    all_pass = all_pass && ks.p_value >= 0.001;
  }
  writer.check("coupling/recursive_vs_walk", all_pass,
               "min KS p=" + format_double(min_p));
}

void run_concentration_suite(const ExperimentConfig& config,
                             SuiteWriter& writer, std::size_t runs) {
  const Network tree6 = make_binary_tree(6);
  const auto tails =
      inverse_local_time_tails(tree6, 1.0, {1.0, 2.0, 4.0, 8.0}, runs,
                               config.seed);
  writer.check("concentration/tau_tails", tails.pass,
               "mean tau=" + format_double(tails.mean_tau) + " expected " +
                   format_double(tails.expected_tau));
  {
    std::vector<std::vector<double>> rows;
    for (const auto& row : tails.rows) {
      rows.push_back({row.lambda, row.threshold, row.empirical, row.bound});
    }
    writer.write_rows("tau_tails.csv",
                      {"lambda", "threshold", "empirical", "bound"}, rows);
  }

  const Network tree8 = make_binary_tree(8);
  const auto concentration = tree_concentration_experiment(
      tree8, runs, config.seed, std::max<std::size_t>(config.gff_samples / 10,
                                                      2000));
  writer.check("concentration/tree_tails_monotone",
               concentration.tails_nonincreasing, "binary tree depth 8");
  writer.check(
      "concentration/tree_log_slope",
      concentration.fitted_points < 2 || concentration.fitted_log_slope < 0.0,
      "slope=" + format_double(concentration.fitted_log_slope));
  writer.write_json("tree_concentration.json", to_json(concentration));

  std::vector<Network> family;
  std::vector<std::string> labels;
  for (int depth = 5; depth <= 9; ++depth) {
    family.push_back(make_binary_tree(depth));
    labels.push_back("binary_depth_" + std::to_string(depth));
  }
  const auto aldous = aldous_concentration_experiment(
      family, labels, runs,
      std::max<std::size_t>(config.gff_samples / 10, 2000), config.seed);
  writer.check("concentration/aldous_dispersion_trend",
               aldous.dispersion_strictly_decreasing,
               "binary trees depth 5..9");
  writer.write_json("aldous.json", to_json(aldous));
  {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < aldous.rows.size(); ++i) {
      rows.push_back({static_cast<double>(i + 5), aldous.rows[i].dispersion,
                      aldous.rows[i].hit_cover_sqrt});
    }
    writer.write_rows("aldous_dispersion.csv",
                      {"depth", "dispersion", "sqrt_hit_over_cover"}, rows);
  }

  // Line family: dispersion does not vanish; reported, not asserted.
  std::vector<Network> lines;
  std::vector<std::string> line_labels;
  for (int n : {50, 100, 200}) {
    lines.push_back(make_path(n, n / 2));
    line_labels.push_back("line_" + std::to_string(n));
  }
  const auto line_report = aldous_concentration_experiment(
      lines, line_labels, runs / 2 + 1,
      std::max<std::size_t>(config.gff_samples / 10, 2000), config.seed + 1);
  writer.write_json("aldous_lines.json", to_json(line_report));

  const Network detect_net = make_binary_tree(4);
  const auto detection = detection_experiment(
      detect_net, config.epsilon, config.gff_samples, config.seed);
  writer.check("concentration/detection_window", detection.pass,
               "empirical=" + format_double(detection.empirical_probability) +
                   " bound=" + format_double(detection.bound));
  writer.write_json("detection.json", to_json(detection));
}

void run_eulerian_suite(const ExperimentConfig& config, SuiteWriter& writer,
                        long long max_vertices, long long max_multiplicity) {
  // Sweep every Eulerian multigraph and compare the determinant counts
  // with brute force, checking root independence and path integrality.
  std::size_t graphs = 0;
  bool all_equal = true;
  bool all_roots = true;
  bool all_integral = true;
  for (int n = 2; n <= max_vertices; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v) slots.emplace_back(u, v);
      }
    }
    EulerianMultigraph g(n);
    std::function<void(std::size_t, long long)> sweep =
        [&](std::size_t slot, long long used) {
          if (slot == slots.size()) {
            if (!g.eulerian()) return;
            // Require full support so each n is counted once.
            if (static_cast<int>(g.support().size()) != n) return;
            ++graphs;
            const auto counts = best_circuit_count(g);
            const BigInt brute = brute_force_circuits(g, max_multiplicity);
            if (counts.circuits != brute) all_equal = false;
            for (const auto& ar : counts.arborescences) {
              if (ar != counts.arborescences.front()) all_roots = false;
            }
            for (int v : counts.support) {
              const BigInt via_formula = path_count(g, v);
              const BigInt via_enum = brute_force_path_count(g, v);
              if (via_formula != via_enum) all_integral = false;
            }
            return;
          }
          const auto [u, v] = slots[slot];
          for (long long j = 0; used + j <= max_multiplicity; ++j) {
            g.set_multiplicity(u, v, j);
            sweep(slot + 1, used + j);
          }
          g.set_multiplicity(u, v, 0);
        };
    sweep(0, 0);
  }
  writer.check("eulerian/best_equals_brute_force", all_equal,
               std::to_string(graphs) + " Eulerian graphs");
  writer.check("eulerian/arborescence_root_independent", all_roots, "");
  writer.check("eulerian/path_count_integral_and_exact", all_integral, "");

  const Network k4 = make_complete(4);
  const auto reversal =
      cycle_reversal_invariance(k4, 1.0, 1000, config.seed);
  writer.check("eulerian/cycle_reversal_invariance", reversal.pass,
               "max log gap " + format_double(reversal.max_log_gap));

  const auto walk_law = walk_law_consistency(1.0, 1.0, 0.1,
                                             config.walk_runs * 50,
                                             config.seed);
  writer.check("eulerian/walk_law_consistency", walk_law.pass,
               std::to_string(walk_law.accepted) + " accepted runs");
}

void run_trend_suite(const ExperimentConfig& config, SuiteWriter& writer,
                     std::size_t cover_runs, std::size_t gff_samples) {
  // Negative control: the line graph misses the identity by 5 pi / 8.
  const Network line = make_path(200, 0);
  CoverEstimateOptions options;
  options.gff_samples = gff_samples;
  options.cover_runs = cover_runs;
  options.start = 100;
  options.seed = config.seed;
  const CoverEstimate line_estimate = estimate_cover_time(line, options);
  const double target = 5.0 * 3.14159265358979323846 / 8.0;
  writer.check("trend/line_negative_control",
               line_estimate.ratio > 0.9 * target &&
                   line_estimate.ratio < 1.1 * target,
               "ratio=" + format_double(line_estimate.ratio) + " target " +
                   format_double(target));
  writer.write_json("line_estimate.json", to_json(line_estimate));

  std::vector<std::vector<double>> rows;
  double previous = 0.0;
  bool decreasing = true;
  double depth10_ratio = 0.0;
  for (int depth : {6, 8, 10}) {
    const Network tree = make_binary_tree(depth);
    CoverEstimateOptions tree_options;
    tree_options.gff_samples = gff_samples;
    tree_options.cover_runs = cover_runs / 2 + 200;
    tree_options.seed = config.seed + depth;
    const CoverEstimate estimate = estimate_cover_time(tree, tree_options);
    rows.push_back({static_cast<double>(depth), estimate.ratio,
                    estimate.estimate, estimate.sim_mean_cover});
    if (previous > 0.0 && estimate.ratio >= previous) decreasing = false;
    previous = estimate.ratio;
    if (depth == 10) depth10_ratio = estimate.ratio;
  }
  writer.write_rows("binary_trend.csv",
                    {"depth", "ratio", "estimate", "sim_mean_cover"}, rows);
  writer.check("trend/binary_ratio_decreasing", decreasing, "depths 6/8/10");
  writer.check("trend/binary_depth10_close", depth10_ratio <= 1.6,
               "ratio=" + format_double(depth10_ratio));
}

}  // namespace

SuiteResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.suite = config.suite;
  SuiteWriter writer(config, result);

  if (config.suite == "mini") {
    // Tiny deterministic suite used by tests and quick sanity runs.
    const Network edge = make_path(2);
    const auto rk = ray_knight_two_sample(edge, 0.5, 3000, config.seed);
    writer.check("mini/ray_knight_edge", rk.pass, "");
    writer.write_json("ray_knight.json", to_json(rk));
    const auto baby = baby_iso_check(1.0, {1.0}, 3000, config.seed);
    writer.check("mini/baby_iso", baby.pass, "");
    writer.write_json("baby_iso.json", to_json(baby));
    CoverEstimateOptions options;
    options.gff_samples = 1500;
    options.cover_runs = 200;
    options.seed = config.seed;
    const auto estimate = estimate_cover_time(make_path(12), options);
    writer.write_json("estimate.json", to_json(estimate));
    std::vector<std::vector<double>> rows;
    rows.push_back({estimate.estimate, estimate.sim_mean_cover,
                    estimate.ratio});
    writer.write_rows("estimate.csv", {"estimate", "sim_mean", "ratio"},
                      rows);
    writer.check("mini/estimate_positive", estimate.estimate > 0.0, "");
  } else if (config.suite == "smoke") {
    ExperimentConfig small = config;
    small.t_values = {0.5};
    run_ray_knight_suite(small, writer, 20000);
    const auto baby = baby_iso_check(1.0, {0.5, 1.0, 2.0}, 20000, config.seed);
    writer.check("baby_iso/ell=1", baby.pass, "");
    writer.write_json("baby_iso.json", to_json(baby));
    run_coupling_suite(small, writer, 1000, 2000);
    run_eulerian_suite(small, writer, 3, 6);
    const Network path = make_path(30);
    CoverEstimateOptions options;
    options.gff_samples = 2000;
    options.cover_runs = 200;
    options.seed = config.seed;
    const auto estimate = estimate_cover_time(path, options);
    writer.check("estimate/path30_ran", estimate.estimate > 0.0, "");
    writer.write_json("path30_estimate.json", to_json(estimate));
  } else if (config.suite == "ray-knight") {
    run_ray_knight_suite(config, writer, config.gff_samples);
  } else if (config.suite == "coupling") {
    run_coupling_suite(config, writer, config.walk_runs * 5, 10000);
  } else if (config.suite == "concentration") {
    run_concentration_suite(config, writer, config.walk_runs * 5);
  } else if (config.suite == "eulerian-sweep") {
    run_eulerian_suite(config, writer, 4, 8);
  } else if (config.suite == "estimator-trend") {
    run_trend_suite(config, writer, config.walk_runs, config.gff_samples);
  } else if (config.suite == "full") {
    run_ray_knight_suite(config, writer, config.gff_samples);
    const auto baby =
        baby_iso_check(1.0, {0.5, 1.0, 2.0}, config.gff_samples, config.seed);
    writer.check("baby_iso/ell=1", baby.pass, "");
    writer.write_json("baby_iso.json", to_json(baby));
    run_coupling_suite(config, writer, 10000, 10000);
    run_concentration_suite(config, writer, config.walk_runs * 5);
    run_eulerian_suite(config, writer, 4, 8);
    run_trend_suite(config, writer, config.walk_runs, config.gff_samples);
  } else {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "unknown suite " + config.suite);
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["suite"] = config.suite;
  summary["pass"] = result.pass;
  json checks = json::array();
  for (const auto& check : result.checks) {
    checks.push_back(
        {{"name", check.name}, {"pass", check.pass}, {"detail", check.detail}});
  }
  summary["checks"] = checks;
  writer.write_json("summary.json", summary);

  json manifest;
  manifest["schema_version"] = kReportSchemaVersion;
  manifest["suite"] = config.suite;
  manifest["seed"] = config.seed;
  manifest["gff_samples"] = config.gff_samples;
  manifest["walk_runs"] = config.walk_runs;
  manifest["t_values"] = config.t_values;
  manifest["epsilon"] = config.epsilon;
  manifest["wall_seconds"] = result.wall_seconds;
  {
    const std::string path = config.output_dir + "/manifest.json";
    std::ofstream out(path);
    out << manifest.dump(2) << '\n';
    result.files_written.push_back(path);
  }
  return result;
}

}  // namespace covergff
