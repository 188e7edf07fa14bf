// Acceptance suite: one integration check per shipping criterion, each
// printing a PASS/FAIL line. Run all with no arguments, a single one with
// --only N. Exit code 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covergff/eulerian.hpp"
#include "covergff/experiments.hpp"
#include "covergff/gff.hpp"
#include "covergff/isomorphism.hpp"
#include "covergff/network.hpp"
#include "covergff/rng.hpp"
#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"
#include "covergff/tree_coupling.hpp"
#include "covergff/walk.hpp"
#include "../support/test_oracles.hpp"

namespace {

using namespace covergff;

constexpr std::uint64_t kSeed = 20260808;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail << "    FAILED: " << what << '\n';
    }
  }
  void note(const std::string& line) { detail << "    " << line << '\n'; }
};

// ---------------------------------------------------------------- 1
// Ray-Knight identity on three networks, t in {0.5, 2}: per-vertex
// two-sample KS p >= 0.001 and E L^x = t within 4 stderr, 1e5 samples.
Outcome criterion_1() {
  Outcome out;
  const std::vector<std::pair<std::string, Network>> nets{
      {"edge", make_path(2)},
      {"path5", make_path(5)},
      {"tree10", make_random_tree(10, kSeed + 10)},
  };
  for (const auto& [label, net] : nets) {
    for (double t : {0.5, 2.0}) {
      const auto report =
          ray_knight_two_sample(net, t, 100000, kSeed + 1);
      double min_p = 1.0;
      double max_lt = 0.0;
      for (const auto& row : report.rows) {
        min_p = std::min(min_p, row.ks_p);
        max_lt = std::max(max_lt, row.local_time_sigmas);
        out.require(row.ks_p >= 0.001,
                    label + " t=" + std::to_string(t) + " vertex " +
                        std::to_string(row.vertex) + " KS p=" +
                        std::to_string(row.ks_p));
        out.require(row.local_time_sigmas <= 4.0,
                    label + " t=" + std::to_string(t) + " vertex " +
                        std::to_string(row.vertex) + " E L off by " +
                        std::to_string(row.local_time_sigmas) + " sigma");
      }
      out.note(label + " t=" + format_double(t) +
               ": min KS p=" + format_double(min_p) +
               ", worst E L gap=" + format_double(max_lt) + " sigma");
    }
  }
  return out;
}

// ---------------------------------------------------------------- 2
// Scalar identity: Laplace transforms at lambda in {0.5,1,2}, ell in
// {0,1,4} match (1+l)^{-1/2} e^{-l ell/(1+l)} within 4 stderr, 1e5 samples.
Outcome criterion_2() {
  Outcome out;
  for (double ell : {0.0, 1.0, 4.0}) {
    const auto report = baby_iso_check(ell, {0.5, 1.0, 2.0}, 100000,
                                       kSeed + 2 + static_cast<int>(ell));
    for (const auto& row : report.rows) {
      out.require(row.pass, "ell=" + std::to_string(ell) + " lambda=" +
                                std::to_string(row.lambda));
      if (ell == 0.0 && row.lambda == 1.0) {
        out.require(std::abs(row.closed_form - 1.0 / std::sqrt(2.0)) < 1e-12,
                    "closed form at ell=0, lambda=1 must be 1/sqrt(2)");
        out.note("ell=0, lambda=1 closed form = " +
                 format_double(row.closed_form) + " ~ 0.70711");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- 3
Outcome criterion_3() {
  Outcome out;
  const Network tree = make_random_tree(50, kSeed + 30);
  const double t = 1.0;
  const std::size_t count = 10000;
  const auto n = static_cast<std::size_t>(tree.vertex_count());

  std::size_t violations = 0;
  std::vector<std::vector<double>> ell_coupled(n, std::vector<double>(count));
  std::vector<std::vector<double>> eta_coupled(n, std::vector<double>(count));
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = Rng::derive(kSeed + 3, 0, i);
    const auto sample = coupled_sampler(tree, t, rng);
    if (!domination_holds(tree, t, sample)) ++violations;
    for (std::size_t v = 0; v < n; ++v) {
      ell_coupled[v][i] = sample.local_times.ell[v];
      eta_coupled[v][i] = sample.field[v];
    }
  }
  out.require(violations == 0,
              std::to_string(violations) + " pointwise domination violations");
  out.note("0 pointwise violations over 10^4 coupled samples");

  std::vector<std::vector<double>> ell_ind(n, std::vector<double>(count));
  std::vector<std::vector<double>> eta_ind(n, std::vector<double>(count));
  const GffSampler sampler(tree, GffSampler::Backend::kTree);
  std::vector<double> field;
  for (std::size_t i = 0; i < count; ++i) {
    Rng a = Rng::derive(kSeed + 3, 1, i);
    const auto ell_field = recursive_local_time_sampler(tree, t, a);
    Rng b = Rng::derive(kSeed + 3, 2, i);
    sampler.sample_into(b, field);
    for (std::size_t v = 0; v < n; ++v) {
      ell_ind[v][i] = ell_field.ell[v];
      eta_ind[v][i] = field[v];
    }
  }
  double min_p = 1.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<int>(v) == tree.root()) continue;
    const auto ks_ell = ks_test_two_sample(ell_coupled[v], ell_ind[v]);
    const auto ks_eta = ks_test_two_sample(eta_coupled[v], eta_ind[v]);
    min_p = std::min({min_p, ks_ell.p_value, ks_eta.p_value});
    out.require(ks_ell.p_value >= 0.001,
                "ell marginal KS at vertex " + std::to_string(v));
    out.require(ks_eta.p_value >= 0.001,
                "eta marginal KS at vertex " + std::to_string(v));
  }
  out.note("marginal KS min p=" + format_double(min_p));
  return out;
}

// ---------------------------------------------------------------- 4
Outcome criterion_4() {
  Outcome out;
  const double t = 1.0;
  const std::size_t count = 10000;
  const std::vector<std::pair<std::string, Network>> trees{
      {"star8", make_star(8)},
      {"random14", make_random_tree(14, kSeed + 41)},
      {"random30", make_random_tree(30, kSeed + 42)},
  };
  for (const auto& [label, tree] : trees) {
    const auto n = static_cast<std::size_t>(tree.vertex_count());
    std::vector<std::vector<double>> recursive(n, std::vector<double>(count));
    std::vector<std::vector<double>> walked(n, std::vector<double>(count));
    for (std::size_t i = 0; i < count; ++i) {
      Rng a = Rng::derive(kSeed + 4, 0, i);
      const auto field = recursive_local_time_sampler(tree, t, a);
      Rng b = Rng::derive(kSeed + 4, 1, i);
      const auto trace = simulate_to_inverse_local_time(tree, t, b);
      for (std::size_t v = 0; v < n; ++v) {
        recursive[v][i] = field.ell[v];
        walked[v][i] = trace.local_times[v];
      }
    }
    double min_p = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (static_cast<int>(v) == tree.root()) continue;
      const auto ks = ks_test_two_sample(recursive[v], walked[v]);
      min_p = std::min(min_p, ks.p_value);
      out.require(ks.p_value >= 0.001, label + " vertex " +
                                           std::to_string(v) + " KS p=" +
                                           std::to_string(ks.p_value));
    }
    out.note(label + ": min KS p=" + format_double(min_p));
  }
  return out;
}

// ---------------------------------------------------------------- 5
Outcome criterion_5() {
  Outcome out;
  std::size_t eulerian_graphs = 0;
  for (int n = 2; n <= 4; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v) slots.emplace_back(u, v);
      }
    }
    EulerianMultigraph g(n);
    std::function<void(std::size_t, long long)> sweep =
        [&](std::size_t slot, long long used) {
          if (!out.pass) return;
          if (slot == slots.size()) {
            if (!g.eulerian()) return;
            if (static_cast<int>(g.support().size()) != n) return;
            ++eulerian_graphs;
            const auto counts = best_circuit_count(g);
            const BigInt brute = brute_force_circuits(g, 8);
            if (counts.circuits != brute) {
              out.require(false, "BEST != brute force on " +
                                     serialize_multigraph(g));
            }
            for (const auto& ar : counts.arborescences) {
              if (ar != counts.arborescences.front()) {
                out.require(false, "root-dependent arborescence count on " +
                                       serialize_multigraph(g));
              }
            }
            for (int v : counts.support) {
              try {
                (void)path_count(g, v);  // throws if not integral
              } catch (const std::exception& error) {
                out.require(false, std::string("path count: ") +
                                       error.what());
              }
            }
            return;
          }
          const auto [u, v] = slots[slot];
          for (long long j = 0; used + j <= 8; ++j) {
            g.set_multiplicity(u, v, j);
            sweep(slot + 1, used + j);
          }
          g.set_multiplicity(u, v, 0);
        };
    sweep(0, 0);
  }
  out.require(eulerian_graphs == 583,  // 4 + 50 + 529 over n = 2, 3, 4
              "sweep size " + std::to_string(eulerian_graphs) + " != 583");
  out.note(std::to_string(eulerian_graphs) +
           " Eulerian multigraphs checked (<= 4 vertices, total "
           "multiplicity <= 8)");
  return out;
}

// ---------------------------------------------------------------- 6
Outcome criterion_6() {
  Outcome out;
  const auto report =
      cycle_reversal_invariance(make_complete(4), 1.0, 1000, kSeed + 6);
  out.require(report.paths_tested == 1000,
              "only " + std::to_string(report.paths_tested) + " paths");
  out.require(report.max_log_gap <= 1e-9,
              "max log gap " + format_double(report.max_log_gap));
  out.note(std::to_string(report.reversals_tested) +
           " reversals, max log gap " + format_double(report.max_log_gap));
  return out;
}

// ---------------------------------------------------------------- 7
Outcome criterion_7() {
  Outcome out;
  const auto report = walk_law_consistency(1.0, 1.0, 0.1, 100000, kSeed + 7);
  out.require(report.accepted > 1000,
              "too few accepted runs: " + std::to_string(report.accepted));
  for (const auto& row : report.rows) {
    out.require(row.pass, "k=" + std::to_string(row.traverses) +
                              " observed=" + format_double(row.observed) +
                              " predicted=" +
                              format_double(row.predicted_mixture));
  }
  out.note(std::to_string(report.accepted) +
           " runs in the +-10% local-time bin");
  return out;
}

// ---------------------------------------------------------------- 8
Outcome criterion_8() {
  Outcome out;
  const int n = 200;
  const Network line = make_path(n, 0);
  const auto sup = estimate_sup(line, 10000, kSeed + 8);
  MeanVar covers;
  for (std::size_t r = 0; r < 2000; ++r) {
    Rng rng = Rng::derive(kSeed + 8, 1, r);
    covers.add(simulate_cover_time(line, n / 2, rng).cover_time);
  }
  const double estimate =
      static_cast<double>(line.edge_count()) * sup.mean_sup * sup.mean_sup;
  const double ratio = covers.mean() / estimate;
  out.note("ratio=" + format_double(ratio) + " (target 5 pi / 8 ~ 1.9635)");
  out.note("mean_sup=" + format_double(sup.mean_sup) +
           " vs asymptotic sqrt(2n/pi)=" +
           format_double(std::sqrt(2.0 * n / 3.14159265358979323846)) +
           "; mean_cover=" + format_double(covers.mean()) +
           " vs exact 49501");
  out.require(ratio >= 1.77 && ratio <= 2.16,
              "ratio " + format_double(ratio) +
                  " outside [1.77, 2.16]. Known finite-size bias: at n=200 "
                  "the expected supremum of the field carries the discrete-"
                  "maximum correction -0.5826, so the true ratio is ~2.18; "
                  "the +-10% window around the n->infinity limit first "
                  "contains the true value near n~400.");
  return out;
}

// ---------------------------------------------------------------- 9
Outcome criterion_9() {
  Outcome out;
  double previous = 0.0;
  double depth10 = 0.0;
  for (int depth : {6, 8, 10}) {
    const Network tree = make_binary_tree(depth);
    const auto sup = estimate_sup(tree, 10000, kSeed + 9 + depth);
    const std::size_t runs = depth == 6 ? 3000 : depth == 8 ? 1500 : 700;
    MeanVar covers;
    for (std::size_t r = 0; r < runs; ++r) {
      Rng rng = Rng::derive(kSeed + 9, depth, r);
      covers.add(simulate_cover_time(tree, tree.root(), rng).cover_time);
    }
    const double estimate =
        static_cast<double>(tree.edge_count()) * sup.mean_sup * sup.mean_sup;
    const double ratio = covers.mean() / estimate;
    out.note("depth " + std::to_string(depth) + ": ratio=" +
             format_double(ratio));
    if (previous > 0.0) {
      out.require(ratio < previous,
                  "ratio did not decrease at depth " + std::to_string(depth));
    }
    previous = ratio;
    if (depth == 10) depth10 = ratio;
  }
  out.require(depth10 <= 1.6,
              "depth-10 ratio " + format_double(depth10) + " > 1.6");
  return out;
}

// ---------------------------------------------------------------- 10
Outcome criterion_10() {
  Outcome out;
  const auto report = inverse_local_time_tails(
      make_binary_tree(6), 1.0, {1.0, 2.0, 4.0, 8.0}, 10000, kSeed + 10);
  for (const auto& row : report.rows) {
    out.require(row.pass,
                "lambda=" + format_double(row.lambda) + " empirical=" +
                    format_double(row.empirical) + " bound=" +
                    format_double(row.bound));
    out.note("lambda=" + format_double(row.lambda) + ": empirical=" +
             format_double(row.empirical) + " bound=" +
             format_double(row.bound));
  }
  return out;
}

// ---------------------------------------------------------------- 11
Outcome criterion_11() {
  Outcome out;
  const Network net = make_binary_tree(4);  // 31 vertices, max degree 3
  const auto report = detection_experiment(net, 0.5, 1000000, kSeed + 11);
  out.note("median=" + format_double(report.median_estimate) +
           ", empirical=" + format_double(report.empirical_probability) +
           ", bound=" + format_double(report.bound));
  out.require(report.max_degree == 3, "expected max degree 3");
  out.require(report.empirical_probability >=
                  report.bound - 4.0 * report.empirical_stderr,
              "window probability below the 5e-4 bound");
  return out;
}

// ---------------------------------------------------------------- 12
Outcome criterion_12() {
  Outcome out;
  // (a) Commute identity, exact to 1e-9 relative, on the test networks.
  const std::vector<std::pair<std::string, Network>> nets{
      {"edge", make_path(2)},
      {"path5", make_path(5)},
      {"triangle", make_complete(3)},
      {"k4", make_complete(4)},
      {"star5", make_star(5)},
      {"binary3", make_binary_tree(3)},
      {"loop", load_network("0 1 1.0\n1 2 1.0\n1 1 2.0")},
      {"tree12", make_random_tree(12, kSeed + 120)},
  };
  double worst = 0.0;
  for (const auto& [label, net] : nets) {
    for (int u = 0; u < net.vertex_count(); ++u) {
      for (int v = u + 1; v < net.vertex_count(); ++v) {
        const double commute =
            hitting_time(net, u, v) + hitting_time(net, v, u);
        const double expected = 2.0 * net.edge_count() *
                                effective_resistance(net, u, v);
        const double gap = std::abs(commute - expected) / expected;
        worst = std::max(worst, gap);
        out.require(gap <= 1e-9, label + " pair (" + std::to_string(u) +
                                     "," + std::to_string(v) + ") gap " +
                                     format_double(gap));
      }
    }
  }
  out.note("worst relative commute gap " + format_double(worst));

  // (b) Cover-time means against the absorbing-chain oracle on every
  // connected unit graph with <= 4 vertices, 1e5 runs, 3 stderr.
  std::size_t graphs = 0;
  double worst_sigma = 0.0;
  for (int n = 2; n <= 4; ++n) {
    std::vector<std::pair<int, int>> all_edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) all_edges.emplace_back(u, v);
    }
    const int subsets = 1 << all_edges.size();
    for (int mask = 1; mask < subsets; ++mask) {
      std::vector<Network::Edge> edges;
      for (std::size_t e = 0; e < all_edges.size(); ++e) {
        if (mask & (1 << e)) {
          edges.push_back({all_edges[e].first, all_edges[e].second, 1.0});
        }
      }
      Network net(1, {{0, 0, 2.0}}, 0);  // placeholder, replaced below
      try {
        net = Network(n, edges, 0);
      } catch (const NetworkError&) {
        continue;  // disconnected or empty
      }
      ++graphs;
      const double oracle = test_support::exact_mean_cover_time(net, 0);
      MeanVar sim;
      for (std::size_t r = 0; r < 100000; ++r) {
        Rng rng = Rng::derive(kSeed + 12, static_cast<std::uint64_t>(mask) |
                                              (static_cast<std::uint64_t>(n)
                                               << 32),
                              r);
        sim.add(simulate_cover_time(net, 0, rng).cover_time);
      }
      const double sigmas =
          std::abs(sim.mean() - oracle) / sim.stderr_mean();
      worst_sigma = std::max(worst_sigma, sigmas);
      out.require(sigmas <= 3.0,
                  "n=" + std::to_string(n) + " mask=" + std::to_string(mask) +
                      " cover mean off by " + format_double(sigmas) +
                      " sigma");
    }
  }
  out.require(graphs == 43, "expected 43 connected graphs, saw " +
                                std::to_string(graphs));
  out.note(std::to_string(graphs) +
           " graphs checked; worst gap " + format_double(worst_sigma) +
           " sigma");
  return out;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    } else if (std::strcmp(argv[i], "--help") == 0) {
      std::cout << "usage: covergff_acceptance [--only N]\n";
      return 0;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "Ray-Knight identity (KS + mean local time)", criterion_1},
      {2, "scalar Poisson/exponential identity (Laplace)", criterion_2},
      {3, "tree coupling: domination + marginals", criterion_3},
      {4, "recursive tree sampler vs walk", criterion_4},
      {5, "circuit counting sweep (determinant vs brute force)", criterion_5},
      {6, "path-weight cycle-reversal invariance", criterion_6},
      {7, "conditioned path law on the two-vertex net", criterion_7},
      {8, "line-graph negative control", criterion_8},
      {9, "binary-tree ratio trend", criterion_9},
      {10, "tau(t) concentration tails", criterion_10},
      {11, "detection-window probability", criterion_11},
      {12, "exact oracles: commute identity + cover means", criterion_12},
  };

  bool all_pass = true;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& error) {
      outcome.pass = false;
      outcome.detail << "    EXCEPTION: " << error.what() << '\n';
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion "
              << criterion.id << ": " << criterion.name << "  ["
              << format_double(seconds) << " s]\n"
              << outcome.detail.str();
    all_pass = all_pass && outcome.pass;
  }
  std::cout << (all_pass ? "ALL SELECTED CRITERIA PASSED"
                         : "SOME CRITERIA FAILED")
            << '\n';
  return all_pass ? 0 : 1;
}
