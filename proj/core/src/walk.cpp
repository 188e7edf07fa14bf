#include "covergff/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"

namespace covergff {

namespace {

/// Embedded discrete chain: jump probabilities c_{uv}/c_u including
/// self-loops.
class EmbeddedChain {
 public:
  explicit EmbeddedChain(const Network& net) : net_(net) {}

  int step(int v, Rng& rng) const {
    double target = rng.uniform() * net_.total_conductance(v);
    target -= net_.loop_conductance(v);
    if (target < 0.0) return v;
    const auto& nb = net_.neighbors(v);
    const auto& cs = net_.neighbor_conductances(v);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
      target -= cs[i];
      if (target < 0.0) return nb[i];
    }
    return nb.back();
  }

  /// Next vertex conditioned on truly leaving v.
  int step_departure(int v, Rng& rng) const {
    double target = rng.uniform() * net_.departure_conductance(v);
    const auto& nb = net_.neighbors(v);
    const auto& cs = net_.neighbor_conductances(v);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
      target -= cs[i];
      if (target < 0.0) return nb[i];
    }
    return nb.back();
  }

 private:
  const Network& net_;
};

WalkTrace simulate_ilt_excursion(const Network& net, double t, Rng& rng) {
  const int root = net.root();
  const double c_root = net.total_conductance(root);
  const double departure_rate = net.departure_conductance(root);
  const EmbeddedChain chain(net);

  WalkTrace trace;
  trace.vertex_count = net.vertex_count();
  trace.root = root;
  trace.root_budget = t;
  trace.local_times.assign(static_cast<std::size_t>(net.vertex_count()), 0.0);

  const std::uint64_t excursion_count = rng.poisson(departure_rate * t);
  std::vector<double> marks(excursion_count);
  for (auto& m : marks) m = rng.uniform() * t;
  std::sort(marks.begin(), marks.end());

  trace.embedded_path.push_back(root);
  double previous_mark = 0.0;
  for (std::size_t i = 0; i < excursion_count; ++i) {
    // Stay at the root until the excursion's mark.
    trace.holding_times.push_back(c_root * (marks[i] - previous_mark));
    previous_mark = marks[i];

    WalkTrace::Excursion excursion;
    excursion.begin = trace.embedded_path.size() - 1;
    excursion.mark = marks[i];
    int v = chain.step_departure(root, rng);
    trace.embedded_path.push_back(v);
    while (v != root) {
      const double hold = rng.exponential();
      trace.holding_times.push_back(hold);
      trace.local_times[static_cast<std::size_t>(v)] +=
          hold / net.total_conductance(v);
      v = chain.step(v, rng);
      trace.embedded_path.push_back(v);
    }
    excursion.end = trace.embedded_path.size() - 1;
    trace.excursions.push_back(excursion);
  }
  // Final stay at the root, truncated exactly at tau(t).
  trace.holding_times.push_back(c_root * (t - previous_mark));
  trace.local_times[static_cast<std::size_t>(root)] = t;

  trace.total_time = 0.0;
  for (double h : trace.holding_times) trace.total_time += h;
  return trace;
}

WalkTrace simulate_ilt_full_chain(const Network& net, double t, Rng& rng) {
  const int root = net.root();
  const double c_root = net.total_conductance(root);
  const EmbeddedChain chain(net);

  WalkTrace trace;
  trace.vertex_count = net.vertex_count();
  trace.root = root;
  trace.root_budget = t;
  trace.local_times.assign(static_cast<std::size_t>(net.vertex_count()), 0.0);
  trace.embedded_path.push_back(root);

  double root_local = 0.0;
  int v = root;
  bool in_excursion = false;
  WalkTrace::Excursion current{};
  for (;;) {
    if (v == root) {
      const double hold = rng.exponential();
      if (root_local + hold / c_root > t) {
        trace.holding_times.push_back((t - root_local) * c_root);
        trace.local_times[static_cast<std::size_t>(root)] = t;
        break;
      }
      root_local += hold / c_root;
      trace.holding_times.push_back(hold);
      const int next = chain.step(root, rng);
      trace.embedded_path.push_back(next);
      if (next != root) {
        in_excursion = true;
        current.begin = trace.embedded_path.size() - 2;
        current.mark = root_local;
      }
      v = next;
    } else {
      const double hold = rng.exponential();
      trace.holding_times.push_back(hold);
      trace.local_times[static_cast<std::size_t>(v)] +=
          hold / net.total_conductance(v);
      const int next = chain.step(v, rng);
      trace.embedded_path.push_back(next);
      if (next == root && in_excursion) {
        current.end = trace.embedded_path.size() - 1;
        trace.excursions.push_back(current);
        in_excursion = false;
      }
      v = next;
    }
  }

  trace.total_time = 0.0;
  for (double h : trace.holding_times) trace.total_time += h;
  return trace;
}

}  // namespace

WalkTrace simulate_to_inverse_local_time(const Network& net, double t,
                                         Rng& rng, IltBackend backend) {
  if (!(t > 0.0)) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "local-time budget must be positive");
  }
  return backend == IltBackend::kExcursion
             ? simulate_ilt_excursion(net, t, rng)
             : simulate_ilt_full_chain(net, t, rng);
}

WalkTrace simulate_to_inverse_local_time(const Network& net, double t,
                                         std::uint64_t seed,
                                         IltBackend backend) {
  Rng rng = Rng::derive(seed, 0, 0);
  return simulate_to_inverse_local_time(net, t, rng, backend);
}

CoverResult simulate_cover_time(const Network& net, int start, Rng& rng) {
  if (start < 0 || start >= net.vertex_count()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "start vertex out of range");
  }
  const EmbeddedChain chain(net);
  std::vector<char> visited(static_cast<std::size_t>(net.vertex_count()), 0);
  visited[static_cast<std::size_t>(start)] = 1;
  int remaining = net.vertex_count() - 1;

  CoverResult result;
  double time = 0.0;
  int v = start;
  std::uint64_t steps = 0;
  while (remaining > 0) {
    time += rng.exponential();
    v = chain.step(v, rng);
    ++steps;
    if (!visited[static_cast<std::size_t>(v)]) {
      visited[static_cast<std::size_t>(v)] = 1;
      --remaining;
    }
  }
  result.cover_time = time;
  result.steps = steps;
  while (v != start) {
    time += rng.exponential();
    v = chain.step(v, rng);
  }
  result.cover_and_return_time = time;
  return result;
}

CoverResult simulate_cover_time(const Network& net, int start,
                                std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0, 0);
  return simulate_cover_time(net, start, rng);
}

PathStats path_stats(const WalkTrace& trace) {
  const auto n = static_cast<std::size_t>(trace.vertex_count);
  PathStats stats;
  stats.traverse_counts.assign(n, std::vector<long long>(n, 0));
  stats.visit_counts.assign(n, 0);
  for (std::size_t k = 0; k + 1 < trace.embedded_path.size(); ++k) {
    const int a = trace.embedded_path[k];
    const int b = trace.embedded_path[k + 1];
    if (a == b) continue;
    ++stats.traverse_counts[static_cast<std::size_t>(a)]
                           [static_cast<std::size_t>(b)];
  }
  for (std::size_t v = 0; v < n; ++v) {
    long long arrivals = 0;
    for (std::size_t u = 0; u < n; ++u) arrivals += stats.traverse_counts[u][v];
    stats.visit_counts[v] = arrivals;
  }
  // At the root, arrivals equal departures on a closed path; the stored
  // value is the excursion count either way.
  return stats;
}

std::vector<double> excursion_marks(const WalkTrace& trace) {
  std::vector<double> marks;
  marks.reserve(trace.excursions.size());
  for (const auto& e : trace.excursions) marks.push_back(e.mark);
  return marks;
}

SprinklingReport sprinkling_probe(const Network& net, double t,
                                  double epsilon, int thin_threshold,
                                  std::size_t runs, std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "epsilon must lie in (0, 1]");
  }
  SprinklingReport report;
  report.t = t;
  report.epsilon = epsilon;
  report.thin_threshold = thin_threshold;
  report.runs = runs;

  const int delta = net.max_degree();
  const long long universal = 1118LL * delta;
  std::size_t universal_hits = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> groups;  // m -> (n, late)

  std::vector<long long> visits(static_cast<std::size_t>(net.vertex_count()));
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = Rng::derive(seed, r);
    const WalkTrace trace =
        simulate_to_inverse_local_time(net, t, rng, IltBackend::kExcursion);
    std::fill(visits.begin(), visits.end(), 0);
    for (std::size_t k = 1; k < trace.embedded_path.size(); ++k) {
      if (trace.embedded_path[k] != trace.embedded_path[k - 1]) {
        ++visits[static_cast<std::size_t>(trace.embedded_path[k])];
      }
    }
    bool universal_thin = false;
    for (int v = 0; v < net.vertex_count(); ++v) {
      if (visits[static_cast<std::size_t>(v)] <= universal) {
        universal_thin = true;
        break;
      }
    }
    universal_hits += universal_thin;

    int chosen = -1;
    for (int v = 0; v < net.vertex_count(); ++v) {
      if (v == net.root()) continue;
      if (visits[static_cast<std::size_t>(v)] <= thin_threshold) {
        chosen = v;
        break;
      }
    }
    if (chosen < 0) continue;
    ++report.runs_with_thin_vertex;

    int excursions_visiting = 0;
    bool all_late = true;
    for (const auto& e : trace.excursions) {
      bool contains = false;
      for (std::size_t k = e.begin + 1; k < e.end; ++k) {
        if (trace.embedded_path[k] == chosen) {
          contains = true;
          break;
        }
      }
      if (contains) {
        ++excursions_visiting;
        if (e.mark < (1.0 - epsilon) * t) all_late = false;
      }
    }
    auto& bucket = groups[excursions_visiting];
    ++bucket.first;
    bucket.second += all_late;
  }

  report.thin_event_rate_universal =
      runs > 0 ? static_cast<double>(universal_hits) /
                     static_cast<double>(runs)
               : 0.0;
  report.thin_event_bound =
      1.0 / (8.0 * delta * std::pow(10.0, delta));
  report.pass = report.thin_event_rate_universal >=
                report.thin_event_bound -
                    4.0 * binomial_stderr(report.thin_event_rate_universal,
                                          runs);
  for (const auto& [m, bucket] : groups) {
    SprinklingReport::MarkGroup group;
    group.excursion_count = m;
    group.runs = bucket.first;
    group.empirical =
        static_cast<double>(bucket.second) / static_cast<double>(bucket.first);
    group.predicted = std::pow(epsilon, m);
    group.stderr_emp = binomial_stderr(group.predicted, bucket.first);
    if (bucket.first >= 50 &&
        std::abs(group.empirical - group.predicted) >
            4.0 * group.stderr_emp) {
      report.pass = false;
    }
    report.groups.push_back(group);
  }
  return report;
}

TauTailReport inverse_local_time_tails(const Network& net, double t,
                                       const std::vector<double>& lambdas,
                                       std::size_t runs, std::uint64_t seed) {
  TauTailReport report;
  report.t = t;
  report.runs = runs;
  report.resistance_diameter = resistance_diameter(net);
  const double edges = static_cast<double>(net.edge_count());
  report.expected_tau = 2.0 * t * edges;

  std::vector<double> taus(runs);
  MeanVar acc;
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = Rng::derive(seed, r);
    taus[r] = simulate_to_inverse_local_time(net, t, rng).total_time;
    acc.add(taus[r]);
  }
  report.mean_tau = acc.mean();

  const double diameter = report.resistance_diameter;
  for (double lambda : lambdas) {
    TauTailReport::Row row;
    row.lambda = lambda;
    row.threshold =
        (std::sqrt(lambda * t * diameter) + lambda * diameter) * edges;
    std::size_t hits = 0;
    for (double tau : taus) {
      if (std::abs(tau - report.expected_tau) >= row.threshold) ++hits;
    }
    row.empirical = static_cast<double>(hits) / static_cast<double>(runs);
    row.bound = 6.0 * std::exp(-lambda / 16.0);
    row.stderr_emp = binomial_stderr(row.empirical, runs);
    row.pass = row.empirical <= row.bound + 4.0 * row.stderr_emp;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace covergff
