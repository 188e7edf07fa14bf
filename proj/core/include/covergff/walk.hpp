#pragma once

#include <cstdint>
#include <vector>

#include "covergff/network.hpp"
#include "covergff/rng.hpp"

namespace covergff {

/// One continuous-time walk realization anchored at the inverse local
/// time: the walk runs until the local time at the root passes the budget
/// t, at which moment it is sitting at the root.
struct WalkTrace {
  int vertex_count = 0;
  int root = 0;
  double root_budget = 0.0;  // t; local_times[root] == t exactly

  /// Embedded vertex sequence S_0..S_K with S_0 = S_K = root. The
  /// excursion backend collapses consecutive stays at the root into one
  /// entry and never emits root self-jumps (they carry no path
  /// information); the full-chain backend emits every embedded jump.
  std::vector<int> embedded_path;
  /// Stay durations aligned with embedded_path; the final stay at the
  /// root is truncated at tau(t). sum(holding_times) == total_time.
  std::vector<double> holding_times;
  /// Per-vertex local times: time at v divided by c_v.
  std::vector<double> local_times;
  /// tau(t) = sum_v c_v * local_times[v].
  double total_time = 0.0;

  struct Excursion {
    std::size_t begin;  // embedded_path[begin] == root
    std::size_t end;    // embedded_path[end] == root, interior away
    double mark;        // root local time when the excursion starts
  };
  std::vector<Excursion> excursions;
};

enum class IltBackend {
  /// Draw the excursion count Poisson(c_root - c_root,root times t), then
  /// independent excursions with uniform marks. Default: it never touches
  /// the unfinished final holding.
  kExcursion,
  /// Event-driven chain, truncated when the root local time passes t.
  kFullChain,
};

WalkTrace simulate_to_inverse_local_time(const Network& net, double t,
                                         Rng& rng,
                                         IltBackend backend =
                                             IltBackend::kExcursion);
/// Convenience overload: one run on stream (seed, 0, 0).
WalkTrace simulate_to_inverse_local_time(const Network& net, double t,
                                         std::uint64_t seed,
                                         IltBackend backend =
                                             IltBackend::kExcursion);

struct CoverResult {
  double cover_time = 0.0;             // first moment every vertex is seen
  double cover_and_return_time = 0.0;  // later first return to the start
  std::uint64_t steps = 0;             // embedded jumps until coverage
};

CoverResult simulate_cover_time(const Network& net, int start, Rng& rng);
CoverResult simulate_cover_time(const Network& net, int start,
                                std::uint64_t seed);

/// Directed traverse counts of the embedded path. k_{u,v} counts moves
/// u -> v for u != v (self-jumps are invisible); visit_counts[v] counts
/// arrivals at v, except at the root where it counts departures, so that
/// a path u -> v -> u has k_u = k_v = 1.
struct PathStats {
  std::vector<std::vector<long long>> traverse_counts;
  std::vector<long long> visit_counts;
};

PathStats path_stats(const WalkTrace& trace);

/// Root local times at which the excursions begin; nondecreasing.
/// Conditioned on the excursion count these are i.i.d. Uniform[0, t]
/// order statistics.
std::vector<double> excursion_marks(const WalkTrace& trace);

/// Sprinkling probe: per run pick the smallest-index non-root vertex with
/// at most thin_threshold visits (the choice depends only on excursion
/// contents, never on timing), and test whether all excursions visiting
/// it have marks in the last eps-fraction of the budget. Conditioned on
/// the number m of such excursions this happens with probability eps^m.
struct SprinklingReport {
  double t = 0.0;
  double epsilon = 0.0;
  int thin_threshold = 0;
  std::size_t runs = 0;
  std::size_t runs_with_thin_vertex = 0;

  struct MarkGroup {
    int excursion_count = 0;  // m
    std::size_t runs = 0;
    double empirical = 0.0;   // fraction with all marks >= (1-eps) t
    double predicted = 0.0;   // eps^m
    double stderr_emp = 0.0;
  };
  std::vector<MarkGroup> groups;

  /// The thin-point existence event with the universal threshold
  /// 1118 * max_degree, against its 1/(8 Delta 10^Delta) lower bound.
  double thin_event_rate_universal = 0.0;
  double thin_event_bound = 0.0;
  bool pass = true;
};

SprinklingReport sprinkling_probe(const Network& net, double t,
                                  double epsilon, int thin_threshold,
                                  std::size_t runs, std::uint64_t seed);

/// Tail check for the concentration of tau(t) around 2t|E|: empirical
/// P(|tau(t) - 2t|E|| >= (sqrt(lambda t R) + lambda R)|E|) against the
/// 6 exp(-lambda/16) bound, R the resistance diameter.
struct TauTailReport {
  double t = 0.0;
  double resistance_diameter = 0.0;
  std::size_t runs = 0;
  struct Row {
    double lambda = 0.0;
    double threshold = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    double stderr_emp = 0.0;
    bool pass = true;
  };
  std::vector<Row> rows;
  double mean_tau = 0.0;
  double expected_tau = 0.0;  // 2 t |E|
  bool pass = true;
};

TauTailReport inverse_local_time_tails(const Network& net, double t,
                                       const std::vector<double>& lambdas,
                                       std::size_t runs, std::uint64_t seed);

/// Exact mean cover time from a start vertex by absorbing-chain solve on
/// the product space (vertex, visited set); feasible for <= 20 or so
/// vertices, intended for <= 4-vertex oracle graphs.
double exact_mean_cover_time(const Network& net, int start);

}  // namespace covergff
