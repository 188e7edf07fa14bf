// covergff: estimate random-walk cover times on finite weighted networks
// through the Gaussian-free-field identity |E| (E sup eta)^2, and verify
// the distributional identities the estimator rests on.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "covergff/eulerian.hpp"
#include "covergff/experiments.hpp"
#include "covergff/gff.hpp"
#include "covergff/isomorphism.hpp"
#include "covergff/network.hpp"
#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"

namespace {

using covergff::Network;
using json = nlohmann::json;

struct GraphOptions {
  std::string path;
  int root = 0;
};

void add_graph_options(CLI::App* cmd, GraphOptions& options) {
  cmd->add_option("--graph", options.path, "edge-list file (\"u v c\" lines)")
      ->required();
  cmd->add_option("--root", options.root, "root vertex (default 0)");
}

Network load(const GraphOptions& options) {
  return covergff::load_network_file(options.path, options.root);
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

std::vector<double> read_local_times(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--ltimes", "cannot open " + path);
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  int v = 0;
  double ell = 0.0;
  while (in >> v >> ell) {
    if (v < 0 || v >= n) {
      throw CLI::ValidationError("--ltimes", "vertex out of range");
    }
    values[static_cast<std::size_t>(v)] = ell;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw CLI::ValidationError("--ltimes",
                                 "missing local time for vertex " +
                                     std::to_string(i));
    }
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cover-time estimation and verification on weighted networks via the "
      "pinned Gaussian free field"};
  app.require_subcommand(1);

  // ---- spectral ----
  GraphOptions res_graph;
  int res_u = 0;
  int res_v = 0;
  auto* resistance =
      app.add_subcommand("resistance", "effective resistance between u and v");
  add_graph_options(resistance, res_graph);
  resistance->add_option("u", res_u)->required();
  resistance->add_option("v", res_v)->required();

  GraphOptions hit_graph;
  int hit_u = 0;
  int hit_v = 0;
  auto* hitting =
      app.add_subcommand("hitting", "expected hitting time from u to v");
  add_graph_options(hitting, hit_graph);
  hitting->add_option("u", hit_u)->required();
  hitting->add_option("v", hit_v)->required();

  GraphOptions reduce_graph;
  std::vector<int> reduce_keep;
  std::string reduce_out;
  auto* reduce = app.add_subcommand(
      "reduce", "Schur-complement reduction onto a kept vertex set");
  add_graph_options(reduce, reduce_graph);
  reduce->add_option("--keep", reduce_keep, "vertices to keep")
      ->required()
      ->delimiter(',');
  reduce->add_option("--out", reduce_out, "write reduced edge list here");

  GraphOptions cov_graph;
  std::string cov_csv;
  auto* covariance = app.add_subcommand(
      "covariance", "pinned field covariance matrix as CSV");
  add_graph_options(covariance, cov_graph);
  covariance->add_option("--csv", cov_csv, "output CSV path")->required();

  GraphOptions lap_graph;
  std::string lap_csv;
  auto* laplacian_cmd =
      app.add_subcommand("laplacian", "conductance Laplacian as CSV");
  add_graph_options(laplacian_cmd, lap_graph);
  laplacian_cmd->add_option("--csv", lap_csv, "output CSV path")->required();

  // ---- gff ----
  GraphOptions sample_graph;
  std::size_t sample_count = 100;
  std::uint64_t sample_seed = 1;
  std::string sample_out;
  auto* gff_sample = app.add_subcommand(
      "gff-sample", "draw field samples (CSV row per sample)");
  add_graph_options(gff_sample, sample_graph);
  gff_sample->add_option("--count", sample_count, "number of samples");
  gff_sample->add_option("--seed", sample_seed, "seed");
  gff_sample->add_option("--out", sample_out, "output CSV")->required();

  GraphOptions sup_graph;
  std::size_t sup_count = 10000;
  std::uint64_t sup_seed = 1;
  auto* gff_sup =
      app.add_subcommand("gff-sup", "estimate mean/median of sup eta");
  add_graph_options(gff_sup, sup_graph);
  gff_sup->add_option("--count", sup_count, "sample count (>= 100)");
  gff_sup->add_option("--seed", sup_seed, "seed");

  GraphOptions detect_graph;
  double detect_eps = 0.5;
  std::size_t detect_count = 100000;
  std::uint64_t detect_seed = 1;
  auto* gff_detect = app.add_subcommand(
      "gff-detect", "detection-window probability above the sup median");
  add_graph_options(gff_detect, detect_graph);
  gff_detect->add_option("--epsilon", detect_eps, "window epsilon in [0,1]");
  gff_detect->add_option("--count", detect_count, "sample count");
  gff_detect->add_option("--seed", detect_seed, "seed");

  // ---- walk ----
  GraphOptions cover_graph;
  int cover_start = 0;
  std::size_t cover_runs = 1000;
  std::uint64_t cover_seed = 1;
  std::string cover_csv;
  auto* walk_cover =
      app.add_subcommand("walk-cover", "simulate cover times");
  add_graph_options(walk_cover, cover_graph);
  walk_cover->add_option("--start", cover_start, "start vertex");
  walk_cover->add_option("--runs", cover_runs, "number of runs");
  walk_cover->add_option("--seed", cover_seed, "seed");
  walk_cover->add_option("--csv", cover_csv, "per-run CSV output");

  GraphOptions ilt_graph;
  double ilt_t = 1.0;
  std::size_t ilt_runs = 1000;
  std::uint64_t ilt_seed = 1;
  std::string ilt_csv;
  bool ilt_locals = false;
  auto* walk_ilt = app.add_subcommand(
      "walk-ilt", "walk to the inverse local time tau(t) at the root");
  add_graph_options(walk_ilt, ilt_graph);
  walk_ilt->add_option("--t", ilt_t, "root local-time budget")->required();
  walk_ilt->add_option("--runs", ilt_runs, "number of runs");
  walk_ilt->add_option("--seed", ilt_seed, "seed");
  walk_ilt->add_option("--csv", ilt_csv, "per-run CSV output");
  walk_ilt->add_flag("--local-times", ilt_locals,
                     "include the per-vertex local-time vector in the CSV");

  // ---- verification ----
  GraphOptions rk_graph;
  double rk_t = 1.0;
  std::size_t rk_count = 100000;
  std::uint64_t rk_seed = 1;
  auto* verify_rk = app.add_subcommand(
      "verify-ray-knight",
      "two-sample check of the local-time/field identity");
  add_graph_options(verify_rk, rk_graph);
  verify_rk->add_option("--t", rk_t, "local-time budget")->required();
  verify_rk->add_option("--count", rk_count, "samples per side");
  verify_rk->add_option("--seed", rk_seed, "seed");

  double baby_ell = 1.0;
  std::vector<double> baby_lambdas{0.5, 1.0, 2.0};
  std::size_t baby_count = 100000;
  std::uint64_t baby_seed = 1;
  auto* verify_baby = app.add_subcommand(
      "verify-baby-iso",
      "Laplace-transform check of the scalar Poisson/exponential identity");
  verify_baby->add_option("--ell", baby_ell, "Poisson mean")->required();
  verify_baby->add_option("--lambda", baby_lambdas, "transform points")
      ->delimiter(',');
  verify_baby->add_option("--count", baby_count, "sample count");
  verify_baby->add_option("--seed", baby_seed, "seed");

  GraphOptions couple_graph;
  double couple_t = 1.0;
  std::size_t couple_count = 10000;
  std::uint64_t couple_seed = 1;
  auto* verify_coupling = app.add_subcommand(
      "verify-coupling",
      "pointwise domination and marginals of the tree coupling");
  verify_coupling
      ->add_option("--tree", couple_graph.path, "tree edge-list file")
      ->required();
  verify_coupling->add_option("--root", couple_graph.root, "root vertex");
  verify_coupling->add_option("--t", couple_t, "budget")->required();
  verify_coupling->add_option("--count", couple_count, "coupled samples");
  verify_coupling->add_option("--seed", couple_seed, "seed");

  GraphOptions conc_graph;
  std::size_t conc_runs = 2000;
  std::size_t conc_sup = 4000;
  std::uint64_t conc_seed = 1;
  std::string conc_csv;
  auto* tree_conc = app.add_subcommand(
      "tree-concentration", "cover-time concentration tails on a tree");
  add_graph_options(tree_conc, conc_graph);
  tree_conc->add_option("--runs", conc_runs, "cover runs");
  tree_conc->add_option("--sup-samples", conc_sup, "field samples");
  tree_conc->add_option("--seed", conc_seed, "seed");
  tree_conc->add_option("--csv", conc_csv, "tail CSV output");

  // ---- eulerian ----
  std::string euler_graph_path;
  auto* euler_count = app.add_subcommand(
      "eulerian-count", "arborescence/circuit counts of a directed multigraph");
  euler_count
      ->add_option("--graph", euler_graph_path, "multigraph file (u v j)")
      ->required();

  std::string pd_graph_path;
  std::string pd_ltimes;
  int pd_root = 0;
  long long pd_cap = 10;
  auto* path_dist = app.add_subcommand(
      "path-dist", "exact conditional path distribution given local times");
  path_dist->add_option("--graph", pd_graph_path, "edge-list file")->required();
  path_dist->add_option("--root", pd_root, "root vertex");
  path_dist->add_option("--ltimes", pd_ltimes, "local times file (v ell)")
      ->required();
  path_dist->add_option("--cap", pd_cap, "max total traverses");

  std::string re_weights_path;
  long long re_cap = 6;
  std::size_t re_count = 10;
  std::uint64_t re_seed = 1;
  auto* random_euler = app.add_subcommand(
      "random-eulerian",
      "sample the arborescence-reweighted random Eulerian model");
  random_euler
      ->add_option("--weights", re_weights_path, "weights file (u v w)")
      ->required();
  random_euler->add_option("--cap", re_cap, "total multiplicity cap");
  random_euler->add_option("--count", re_count, "draws");
  random_euler->add_option("--seed", re_seed, "seed");

  // ---- experiments ----
  std::string experiment_config_path;
  auto* experiment =
      app.add_subcommand("experiment", "run a configured experiment suite");
  experiment->add_option("--config", experiment_config_path, "JSON config")
      ->required();

  GraphOptions est_graph;
  std::size_t est_gff = 10000;
  std::size_t est_runs = 0;
  int est_start = -1;
  double est_eps = 0.1;
  std::uint64_t est_seed = 1;
  auto* estimate = app.add_subcommand(
      "estimate", "cover-time estimate |E| (E sup eta)^2 with diagnostics");
  add_graph_options(estimate, est_graph);
  estimate->add_option("--gff-samples", est_gff, "field samples");
  estimate->add_option("--cover-runs", est_runs,
                       "simulated cover runs (0 = skip)");
  estimate->add_option("--start", est_start, "cover start vertex");
  estimate->add_option("--epsilon", est_eps, "gate epsilon");
  estimate->add_option("--seed", est_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (resistance->parsed()) {
      const Network net = load(res_graph);
      emit(json{{"u", res_u},
                {"v", res_v},
                {"effective_resistance",
                 covergff::effective_resistance(net, res_u, res_v)}});
    } else if (hitting->parsed()) {
      const Network net = load(hit_graph);
      emit(json{{"u", hit_u},
                {"v", hit_v},
                {"hitting_time", covergff::hitting_time(net, hit_u, hit_v)},
                {"max_hitting_time", covergff::max_hitting_time(net)}});
    } else if (reduce->parsed()) {
      const Network net = load(reduce_graph);
      const Network reduced = covergff::reduce_network(net, reduce_keep);
      json edges = json::array();
      for (const auto& e : reduced.sorted_edges()) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"c", e.conductance}});
      }
      std::vector<int> keep_sorted(reduce_keep);
      std::sort(keep_sorted.begin(), keep_sorted.end());
      keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()),
                        keep_sorted.end());
      if (!reduce_out.empty()) {
        std::ofstream out(reduce_out);
        out << covergff::serialize_network(reduced);
      }
      emit(json{{"kept_original_vertices", keep_sorted},
                {"root", reduced.root()},
                {"edges", edges}});
    } else if (covariance->parsed()) {
      const Network net = load(cov_graph);
      const auto cov = covergff::gff_covariance(net);
      std::vector<std::string> header;
      std::vector<std::vector<double>> rows;
      for (int v = 0; v < net.vertex_count(); ++v) {
        header.push_back("v" + std::to_string(v));
      }
      for (int u = 0; u < net.vertex_count(); ++u) {
        std::vector<double> row;
        for (int v = 0; v < net.vertex_count(); ++v) {
          row.push_back(cov.cov(u, v));
        }
        rows.push_back(std::move(row));
      }
      covergff::write_csv(cov_csv, header, rows);
      emit(json{{"csv", cov_csv}, {"jitter", cov.jitter}});
    } else if (laplacian_cmd->parsed()) {
      const Network net = load(lap_graph);
      const Eigen::MatrixXd lap = covergff::laplacian(net);
      std::vector<std::string> header;
      std::vector<std::vector<double>> rows;
      for (int v = 0; v < net.vertex_count(); ++v) {
        header.push_back("v" + std::to_string(v));
      }
      for (int u = 0; u < net.vertex_count(); ++u) {
        std::vector<double> row;
        for (int v = 0; v < net.vertex_count(); ++v) row.push_back(lap(u, v));
        rows.push_back(std::move(row));
      }
      covergff::write_csv(lap_csv, header, rows);
      emit(json{{"csv", lap_csv}});
    } else if (gff_sample->parsed()) {
      const Network net = load(sample_graph);
      const covergff::GffSampler sampler(net);
      std::vector<std::string> header;
      for (int v = 0; v < net.vertex_count(); ++v) {
        header.push_back("v" + std::to_string(v));
      }
      std::vector<std::vector<double>> rows(sample_count);
      std::vector<double> field;
      for (std::size_t i = 0; i < sample_count; ++i) {
        covergff::Rng rng = covergff::Rng::derive(sample_seed, 0, i);
        sampler.sample_into(rng, field);
        rows[i] = field;
      }
      covergff::write_csv(sample_out, header, rows);
      emit(json{{"csv", sample_out}, {"count", sample_count}});
    } else if (gff_sup->parsed()) {
      const Network net = load(sup_graph);
      const auto stats = covergff::estimate_sup(net, sup_count, sup_seed);
      emit(json{{"mean_sup", stats.mean_sup},
                {"median_sup", stats.median_sup},
                {"stderr", stats.stderr_mean},
                {"median_stderr", stats.median_stderr},
                {"sigma_max", stats.sigma_max},
                {"sample_count", stats.sample_count},
                {"concentration_violation_rate",
                 stats.concentration_violation_rate},
                {"concentration_ok", stats.concentration_ok}});
    } else if (gff_detect->parsed()) {
      const Network net = load(detect_graph);
      const auto report = covergff::detection_experiment(
          net, detect_eps, detect_count, detect_seed);
      emit(json{{"epsilon", report.epsilon},
                {"max_degree", report.max_degree},
                {"sample_count", report.sample_count},
                {"median_estimate", report.median_estimate},
                {"median_stderr", report.median_stderr},
                {"empirical_probability", report.empirical_probability},
                {"empirical_stderr", report.empirical_stderr},
                {"bound", report.bound},
                {"pass", report.pass},
                {"empirical_probability_wide",
                 report.empirical_probability_wide},
                {"bound_general", report.bound_general},
                {"sup_tail_probability", report.sup_tail_probability}});
    } else if (walk_cover->parsed()) {
      const Network net = load(cover_graph);
      covergff::MeanVar acc;
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < cover_runs; ++r) {
        covergff::Rng rng = covergff::Rng::derive(cover_seed, r);
        const auto result =
            covergff::simulate_cover_time(net, cover_start, rng);
        acc.add(result.cover_time);
        if (!cover_csv.empty()) {
          rows.push_back({static_cast<double>(r), result.cover_time,
                          result.cover_and_return_time,
                          static_cast<double>(result.steps)});
        }
      }
      if (!cover_csv.empty()) {
        covergff::write_csv(
            cover_csv, {"run", "cover_time", "cover_and_return", "steps"},
            rows);
      }
      emit(json{{"runs", cover_runs},
                {"mean_cover", acc.mean()},
                {"sd_cover", acc.stddev()},
                {"stderr", acc.stderr_mean()}});
    } else if (walk_ilt->parsed()) {
      const Network net = load(ilt_graph);
      covergff::MeanVar acc;
      std::vector<std::vector<double>> rows;
      std::vector<std::string> header{"run", "tau", "excursions"};
      if (ilt_locals) {
        for (int v = 0; v < net.vertex_count(); ++v) {
          header.push_back("L" + std::to_string(v));
        }
      }
      for (std::size_t r = 0; r < ilt_runs; ++r) {
        covergff::Rng rng = covergff::Rng::derive(ilt_seed, r);
        const auto trace =
            covergff::simulate_to_inverse_local_time(net, ilt_t, rng);
        acc.add(trace.total_time);
        if (!ilt_csv.empty()) {
          std::vector<double> row{static_cast<double>(r), trace.total_time,
                                  static_cast<double>(
                                      trace.excursions.size())};
          if (ilt_locals) {
            row.insert(row.end(), trace.local_times.begin(),
                       trace.local_times.end());
          }
          rows.push_back(std::move(row));
        }
      }
      if (!ilt_csv.empty()) covergff::write_csv(ilt_csv, header, rows);
      emit(json{{"runs", ilt_runs},
                {"t", ilt_t},
                {"mean_tau", acc.mean()},
                {"expected_tau", 2.0 * ilt_t * net.edge_count()},
                {"stderr", acc.stderr_mean()}});
    } else if (verify_rk->parsed()) {
      const Network net = load(rk_graph);
      const auto report =
          covergff::ray_knight_two_sample(net, rk_t, rk_count, rk_seed);
      json rows = json::array();
      for (const auto& row : report.rows) {
        rows.push_back({{"vertex", row.vertex},
                        {"ks_p", row.ks_p},
                        {"local_time_mean", row.local_time_mean},
                        {"pass", row.pass}});
      }
      emit(json{{"t", report.t},
                {"sample_count", report.sample_count},
                {"pass", report.pass},
                {"rows", rows}});
      return report.pass ? 0 : 1;
    } else if (verify_baby->parsed()) {
      const auto report = covergff::baby_iso_check(baby_ell, baby_lambdas,
                                                   baby_count, baby_seed);
      json rows = json::array();
      for (const auto& row : report.rows) {
        rows.push_back({{"lambda", row.lambda},
                        {"closed_form", row.closed_form},
                        {"lhs_empirical", row.lhs_empirical},
                        {"rhs_empirical", row.rhs_empirical},
                        {"pass", row.pass}});
      }
      emit(json{{"ell", report.ell}, {"pass", report.pass}, {"rows", rows}});
      return report.pass ? 0 : 1;
    } else if (verify_coupling->parsed()) {
      const Network tree = load(couple_graph);
      std::size_t violations = 0;
      for (std::size_t i = 0; i < couple_count; ++i) {
        covergff::Rng rng = covergff::Rng::derive(couple_seed, i);
        const auto sample = covergff::coupled_sampler(tree, couple_t, rng);
        if (!covergff::domination_holds(tree, couple_t, sample)) {
          ++violations;
        }
      }
      emit(json{{"t", couple_t},
                {"count", couple_count},
                {"violations", violations},
                {"pass", violations == 0}});
      return violations == 0 ? 0 : 1;
    } else if (tree_conc->parsed()) {
      const Network tree = load(conc_graph);
      const auto report = covergff::tree_concentration_experiment(
          tree, conc_runs, conc_seed, conc_sup);
      if (!conc_csv.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& row : report.tails) {
          rows.push_back({row.lambda, row.threshold, row.empirical,
                          row.normalized_threshold,
                          row.normalized_empirical});
        }
        covergff::write_csv(conc_csv,
                            {"lambda", "threshold", "empirical",
                             "normalized_threshold", "normalized_empirical"},
                            rows);
      }
      emit(json{{"runs", report.runs},
                {"mean_sup", report.mean_sup},
                {"predicted_cover", report.predicted_cover},
                {"mean_cover", report.mean_cover},
                {"sd_cover", report.sd_cover},
                {"t_hit", report.t_hit},
                {"tails_nonincreasing", report.tails_nonincreasing},
                {"fitted_log_slope", report.fitted_log_slope}});
    } else if (euler_count->parsed()) {
      std::ifstream in(euler_graph_path);
      if (!in) throw CLI::ValidationError("--graph", "cannot open file");
      std::ostringstream body;
      body << in.rdbuf();
      const auto graph = covergff::load_multigraph(body.str());
      const auto counts = covergff::best_circuit_count(graph);
      json rooted = json::object();
      for (std::size_t i = 0; i < counts.support.size(); ++i) {
        rooted[std::to_string(counts.support[i])] =
            counts.rooted[i].str();
      }
      emit(json{{"circuits", counts.circuits.str()},
                {"arborescences", counts.arborescences.front().str()},
                {"rooted_circuits", rooted}});
    } else if (path_dist->parsed()) {
      const Network net = covergff::load_network_file(pd_graph_path, pd_root);
      const auto ltimes = read_local_times(pd_ltimes, net.vertex_count());
      const auto dist =
          covergff::conditioned_path_distribution(net, ltimes, pd_cap);
      json paths = json::array();
      for (const auto& entry : dist.paths) {
        paths.push_back(
            {{"path", entry.path}, {"probability", entry.probability}});
      }
      emit(json{{"paths", paths},
                {"path_count", dist.paths.size()},
                {"max_aggregation_gap", dist.max_aggregation_gap}});
    } else if (random_euler->parsed()) {
      std::ifstream in(re_weights_path);
      if (!in) throw CLI::ValidationError("--weights", "cannot open file");
      int u = 0;
      int v = 0;
      double w = 0.0;
      int max_vertex = -1;
      std::vector<std::tuple<int, int, double>> entries;
      while (in >> u >> v >> w) {
        entries.emplace_back(u, v, w);
        max_vertex = std::max({max_vertex, u, v});
      }
      const int n = max_vertex + 1;
      std::vector<std::vector<double>> weights(
          static_cast<std::size_t>(n),
          std::vector<double>(static_cast<std::size_t>(n), 0.0));
      for (const auto& [eu, ev, ew] : entries) {
        weights[static_cast<std::size_t>(eu)][static_cast<std::size_t>(ev)] =
            ew;
      }
      const auto model =
          covergff::enumerate_random_eulerian(n, weights, re_cap);
      covergff::Rng rng = covergff::Rng::derive(re_seed, 0);
      json draws = json::array();
      for (std::size_t i = 0; i < re_count; ++i) {
        draws.push_back(covergff::serialize_multigraph(model.sample(rng)));
      }
      emit(json{{"atoms", model.atoms.size()}, {"draws", draws}});
    } else if (experiment->parsed()) {
      const auto config =
          covergff::ExperimentConfig::from_file(experiment_config_path);
      const auto result = covergff::run_experiment(config);
      json checks = json::array();
      for (const auto& check : result.checks) {
        checks.push_back({{"name", check.name},
                          {"pass", check.pass},
                          {"detail", check.detail}});
      }
      emit(json{{"suite", result.suite},
                {"pass", result.pass},
                {"wall_seconds", result.wall_seconds},
                {"files", result.files_written},
                {"checks", checks}});
      return result.pass ? 0 : 1;
    } else if (estimate->parsed()) {
      const Network net = load(est_graph);
      covergff::CoverEstimateOptions options;
      options.gff_samples = est_gff;
      options.cover_runs = est_runs;
      options.start = est_start;
      options.epsilon = est_eps;
      options.seed = est_seed;
      const auto result = covergff::estimate_cover_time(net, options);
      json doc{{"estimate", result.estimate},
               {"ci_low", result.ci_low},
               {"ci_high", result.ci_high},
               {"mean_sup", result.mean_sup},
               {"t_hit_exact", result.t_hit_exact},
               {"gate_ratio", result.gate_ratio},
               {"gate_threshold", result.gate_threshold},
               {"gate_pass", result.gate_pass},
               {"gate_heuristic", result.gate_heuristic}};
      if (result.simulated) {
        doc["sim_mean_cover"] = result.sim_mean_cover;
        doc["ratio"] = result.ratio;
        doc["dlp_upper_sanity"] = result.dlp_upper_sanity;
      }
      emit(doc);
    }
  } catch (const covergff::NetworkError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  }
  return 0;
}
