#include "covergff/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "covergff/stats.hpp"
#include "covergff/walk.hpp"

namespace covergff {

EulerianMultigraph::EulerianMultigraph(int vertex_count) : n_(vertex_count) {
  if (vertex_count <= 0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "vertex count must be positive");
  }
  mult_.assign(static_cast<std::size_t>(n_),
               std::vector<long long>(static_cast<std::size_t>(n_), 0));
}

void EulerianMultigraph::set_multiplicity(int u, int v, long long j) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "vertex out of range");
  }
  if (u == v && j != 0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "directed self-multiplicities are not allowed");
  }
  if (j < 0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "multiplicity must be nonnegative");
  }
  mult_[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = j;
}

long long EulerianMultigraph::out_degree(int v) const {
  long long total = 0;
  for (long long j : mult_[static_cast<std::size_t>(v)]) total += j;
  return total;
}

long long EulerianMultigraph::in_degree(int v) const {
  long long total = 0;
  for (const auto& row : mult_) total += row[static_cast<std::size_t>(v)];
  return total;
}

long long EulerianMultigraph::total_multiplicity() const {
  long long total = 0;
  for (const auto& row : mult_) {
    for (long long j : row) total += j;
  }
  return total;
}

bool EulerianMultigraph::balanced() const {
  for (int v = 0; v < n_; ++v) {
    if (in_degree(v) != out_degree(v)) return false;
  }
  return true;
}

std::vector<int> EulerianMultigraph::support() const {
  std::vector<int> vertices;
  for (int v = 0; v < n_; ++v) {
    if (in_degree(v) + out_degree(v) > 0) vertices.push_back(v);
  }
  return vertices;
}

bool EulerianMultigraph::connected_on_support() const {
  const auto vertices = support();
  if (vertices.empty()) return false;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::queue<int> frontier;
  frontier.push(vertices.front());
  seen[static_cast<std::size_t>(vertices.front())] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u = 0; u < n_; ++u) {
      if (seen[static_cast<std::size_t>(u)]) continue;
      if (multiplicity(v, u) > 0 || multiplicity(u, v) > 0) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  return reached == vertices.size();
}

EulerianMultigraph load_multigraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::tuple<int, int, long long>> entries;
  int max_vertex = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    long long j = 0;
    if (!(fields >> u)) continue;
    if (!(fields >> v >> j) || u < 0 || v < 0 || j < 0) {
      throw NetworkError(NetworkErrorCode::kParseError,
                         "line " + std::to_string(line_no) +
                             ": expected \"u v j\"");
    }
    entries.emplace_back(static_cast<int>(u), static_cast<int>(v), j);
    max_vertex = std::max({max_vertex, static_cast<int>(u),
                           static_cast<int>(v)});
  }
  if (entries.empty()) {
    throw NetworkError(NetworkErrorCode::kParseError, "no entries");
  }
  EulerianMultigraph g(max_vertex + 1);
  for (const auto& [u, v, j] : entries) {
    g.set_multiplicity(u, v, g.multiplicity(u, v) + j);
  }
  return g;
}

std::string serialize_multigraph(const EulerianMultigraph& g) {
  std::string out;
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.multiplicity(u, v) > 0) {
        out += std::to_string(u) + ' ' + std::to_string(v) + ' ' +
               std::to_string(g.multiplicity(u, v)) + '\n';
      }
    }
  }
  return out;
}

namespace {

/// Exact integer determinant by fraction-free Bareiss elimination.
BigInt integer_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return BigInt(1);
  BigInt previous_pivot(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return BigInt(0);
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous_pivot;
      }
      m[i][k] = 0;
    }
    previous_pivot = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

BigInt factorial(long long k) {
  BigInt result(1);
  for (long long i = 2; i <= k; ++i) result *= i;
  return result;
}

}  // namespace

BigInt arborescence_count(const EulerianMultigraph& g, int root) {
  const auto vertices = g.support();
  if (vertices.empty()) return BigInt(0);
  if (std::find(vertices.begin(), vertices.end(), root) == vertices.end()) {
    return BigInt(0);
  }
  if (!g.connected_on_support()) return BigInt(0);
  // Out-degree Laplacian restricted to the support, minus the root
  // row/column: its determinant counts arborescences toward the root.
  std::vector<int> rows;
  for (int v : vertices) {
    if (v != root) rows.push_back(v);
  }
  const std::size_t m = rows.size();
  std::vector<std::vector<BigInt>> matrix(m, std::vector<BigInt>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) {
        matrix[i][j] = BigInt(g.out_degree(rows[i]));
      } else {
        matrix[i][j] = BigInt(-g.multiplicity(rows[i], rows[j]));
      }
    }
  }
  return integer_determinant(std::move(matrix));
}

CircuitCounts best_circuit_count(const EulerianMultigraph& g) {
  if (!g.eulerian()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "graph is not Eulerian");
  }
  CircuitCounts counts;
  counts.support = g.support();
  BigInt degree_product(1);
  for (int v : counts.support) {
    degree_product *= factorial(g.out_degree(v) - 1);
  }
  for (int v : counts.support) {
    counts.arborescences.push_back(arborescence_count(g, v));
  }
  for (std::size_t i = 1; i < counts.arborescences.size(); ++i) {
    if (counts.arborescences[i] != counts.arborescences[0]) {
      throw std::logic_error(
          "arborescence counts of an Eulerian graph must not depend on the "
          "root");
    }
  }
  counts.circuits = counts.arborescences[0] * degree_product;
  for (int v : counts.support) {
    counts.rooted.push_back(counts.circuits * g.out_degree(v));
  }
  return counts;
}

namespace {

/// Counts closed walks from `start` using every edge exactly once at the
/// multiplicity level (parallel edges collapsed); multiply by instance
/// permutations where needed.
BigInt count_multiplicity_sequences(EulerianMultigraph& g, int current,
                                    int start, long long remaining) {
  if (remaining == 0) return current == start ? BigInt(1) : BigInt(0);
  BigInt total(0);
  for (int next = 0; next < g.vertex_count(); ++next) {
    const long long j = g.multiplicity(current, next);
    if (j == 0) continue;
    g.set_multiplicity(current, next, j - 1);
    total += count_multiplicity_sequences(g, next, start, remaining - 1);
    g.set_multiplicity(current, next, j);
  }
  return total;
}

}  // namespace

BigInt brute_force_circuits(const EulerianMultigraph& g, long long edge_cap) {
  if (!g.eulerian()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "graph is not Eulerian");
  }
  const long long edges = g.total_multiplicity();
  if (edges > edge_cap) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "edge count exceeds the brute-force cap");
  }
  // Anchor at the lexicographically smallest edge instance: every circuit
  // has exactly one rotation starting with it, so trails beginning with
  // that instance count circuits up to rotation.
  int first_u = -1;
  int first_v = -1;
  for (int u = 0; u < g.vertex_count() && first_u < 0; ++u) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.multiplicity(u, v) > 0) {
        first_u = u;
        first_v = v;
        break;
      }
    }
  }
  EulerianMultigraph work = g;
  work.set_multiplicity(first_u, first_v, g.multiplicity(first_u, first_v) - 1);
  const BigInt sequences =
      count_multiplicity_sequences(work, first_v, first_u, edges - 1);

  // Instance-level weight: the anchored instance is fixed; the remaining
  // copies of its edge and of every other edge permute freely.
  BigInt weight = factorial(g.multiplicity(first_u, first_v) - 1);
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (u == first_u && v == first_v) continue;
      if (g.multiplicity(u, v) > 1) weight *= factorial(g.multiplicity(u, v));
    }
  }
  return sequences * weight;
}

BigInt path_count(const EulerianMultigraph& g, int v0) {
  if (!g.eulerian()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "graph is not Eulerian");
  }
  const auto support = g.support();
  if (std::find(support.begin(), support.end(), v0) == support.end()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "start vertex carries no edges");
  }
  const CircuitCounts counts = best_circuit_count(g);
  BigInt rooted(0);
  for (std::size_t i = 0; i < counts.support.size(); ++i) {
    if (counts.support[i] == v0) rooted = counts.rooted[i];
  }
  BigInt divisor(1);
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.multiplicity(u, v) > 1) divisor *= factorial(g.multiplicity(u, v));
    }
  }
  if (rooted % divisor != 0) {
    throw std::logic_error("path count formula produced a non-integer");
  }
  return rooted / divisor;
}

BigInt brute_force_path_count(const EulerianMultigraph& g, int v0) {
  if (!g.eulerian()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "graph is not Eulerian");
  }
  EulerianMultigraph work = g;
  return count_multiplicity_sequences(work, v0, v0, g.total_multiplicity());
}

namespace {

struct PathCounts {
  std::vector<std::vector<long long>> traverses;
  std::vector<long long> visits;  // arrivals; at the root: departures
  int root = 0;
};

PathCounts tally_path(const std::vector<int>& path, const Network& net) {
  if (path.size() < 2 || path.front() != net.root() ||
      path.back() != net.root()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "path must start and end at the root");
  }
  const auto n = static_cast<std::size_t>(net.vertex_count());
  PathCounts counts;
  counts.root = net.root();
  counts.traverses.assign(n, std::vector<long long>(n, 0));
  counts.visits.assign(n, 0);
  std::vector<char> seen(n, 0);
  seen[static_cast<std::size_t>(net.root())] = 1;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int a = path[k];
    const int b = path[k + 1];
    if (a < 0 || b < 0 || a >= net.vertex_count() || b >= net.vertex_count() ||
        (a != b && net.conductance(a, b) <= 0.0)) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "path uses a missing edge");
    }
    if (a == b) continue;
    ++counts.traverses[static_cast<std::size_t>(a)]
                      [static_cast<std::size_t>(b)];
    seen[static_cast<std::size_t>(b)] = 1;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "path does not cover every vertex");
    }
    long long arrivals = 0;
    for (std::size_t u = 0; u < n; ++u) arrivals += counts.traverses[u][v];
    counts.visits[v] = arrivals;
  }
  return counts;
}

double log_weight_from_counts(const PathCounts& counts,
                              const std::vector<double>& local_times,
                              const Network& net) {
  const auto n = static_cast<std::size_t>(net.vertex_count());
  const double t = local_times[static_cast<std::size_t>(counts.root)];
  double log_w = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const long long k = counts.traverses[u][v];
      if (k > 0) {
        log_w += static_cast<double>(k) *
                 std::log(net.conductance(static_cast<int>(u),
                                          static_cast<int>(v)));
      }
    }
  }
  const auto k_root = static_cast<double>(
      counts.visits[static_cast<std::size_t>(counts.root)]);
  log_w += k_root * std::log(t) - std::lgamma(k_root + 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<int>(v) == counts.root) continue;
    const auto k_v = static_cast<double>(counts.visits[v]);
    log_w += k_v * std::log(local_times[v]) - std::lgamma(k_v);
  }
  return log_w;
}

void check_local_times(const std::vector<double>& local_times,
                       const Network& net) {
  if (local_times.size() != static_cast<std::size_t>(net.vertex_count())) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "one local time per vertex required");
  }
  for (double ell : local_times) {
    if (!(ell > 0.0)) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "local times must be positive");
    }
  }
}

}  // namespace

PathWeight path_weight(const std::vector<int>& path,
                       const std::vector<double>& local_times,
                       const Network& net) {
  check_local_times(local_times, net);
  const PathCounts counts = tally_path(path, net);
  PathWeight w;
  w.log_value = log_weight_from_counts(counts, local_times, net);
  w.value = std::exp(w.log_value);
  return w;
}

PathWeight path_joint_density(const std::vector<int>& path,
                              const std::vector<double>& local_times,
                              const Network& net) {
  check_local_times(local_times, net);
  const PathCounts counts = tally_path(path, net);
  double log_w = log_weight_from_counts(counts, local_times, net);
  // Convert prod ell^{k_v} into ell^{k_v - 1} and attach the exponential
  // prefactors of the joint density.
  for (int v = 0; v < net.vertex_count(); ++v) {
    const double ell = local_times[static_cast<std::size_t>(v)];
    if (v == net.root()) {
      log_w -= net.departure_conductance(v) * ell;
    } else {
      log_w -= std::log(ell);
      log_w -= net.departure_conductance(v) * ell;
    }
  }
  PathWeight w;
  w.log_value = log_w;
  w.value = std::exp(log_w);
  return w;
}

namespace {

void enumerate_closed_paths(const Network& net, long long cap,
                            std::vector<int>& path, int covered,
                            std::vector<int>& visit_count,
                            const std::function<void(const std::vector<int>&)>&
                                emit) {
  const int current = path.back();
  if (current == net.root() && covered == net.vertex_count() &&
      path.size() > 1) {
    emit(path);
  }
  if (static_cast<long long>(path.size()) - 1 >= cap) return;
  for (int next : net.neighbors(current)) {
    path.push_back(next);
    ++visit_count[static_cast<std::size_t>(next)];
    const int newly =
        visit_count[static_cast<std::size_t>(next)] == 1 ? 1 : 0;
    enumerate_closed_paths(net, cap, path, covered + newly, visit_count, emit);
    --visit_count[static_cast<std::size_t>(next)];
    path.pop_back();
  }
}

}  // namespace

PathDistribution conditioned_path_distribution(
    const Network& net, const std::vector<double>& local_times,
    long long traverse_cap) {
  if (net.vertex_count() > 4) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "exact enumeration is limited to 4 vertices");
  }
  check_local_times(local_times, net);

  PathDistribution dist;
  std::vector<int> path{net.root()};
  std::vector<int> visit_count(static_cast<std::size_t>(net.vertex_count()),
                               0);
  visit_count[static_cast<std::size_t>(net.root())] = 1;
  enumerate_closed_paths(
      net, traverse_cap, path, 1, visit_count,
      [&](const std::vector<int>& found) {
        PathDistribution::Entry entry;
        entry.path = found;
        entry.log_weight =
            path_weight(found, local_times, net).log_value;
        dist.paths.push_back(std::move(entry));
      });
  if (dist.paths.empty()) return dist;

  double max_log = dist.paths.front().log_weight;
  for (const auto& entry : dist.paths) {
    max_log = std::max(max_log, entry.log_weight);
  }
  double total = 0.0;
  for (const auto& entry : dist.paths) {
    total += std::exp(entry.log_weight - max_log);
  }
  dist.log_normalizer = max_log + std::log(total);
  for (auto& entry : dist.paths) {
    entry.probability = std::exp(entry.log_weight - dist.log_normalizer);
  }

  // Aggregate by induced multigraph and compare with the closed form
  // ar_{v0} * prod (sqrt(ell_u ell_v) c_uv)^{j} / j!.
  std::map<std::string, std::pair<EulerianMultigraph, double>> classes;
  for (const auto& entry : dist.paths) {
    EulerianMultigraph g(net.vertex_count());
    for (std::size_t k = 0; k + 1 < entry.path.size(); ++k) {
      const int a = entry.path[k];
      const int b = entry.path[k + 1];
      if (a != b) g.set_multiplicity(a, b, g.multiplicity(a, b) + 1);
    }
    auto key = serialize_multigraph(g);
    auto [it, inserted] = classes.try_emplace(std::move(key), g, 0.0);
    it->second.second += entry.probability;
  }
  for (auto& [key, value] : classes) {
    PathDistribution::ClassEntry cls{value.first, value.second, 0.0};
    double log_mass = std::log(static_cast<double>(
        arborescence_count(cls.graph, net.root())));
    for (int u = 0; u < net.vertex_count(); ++u) {
      for (int v = 0; v < net.vertex_count(); ++v) {
        const long long j = cls.graph.multiplicity(u, v);
        if (j == 0) continue;
        const double ell_u = local_times[static_cast<std::size_t>(u)];
        const double ell_v = local_times[static_cast<std::size_t>(v)];
        log_mass += static_cast<double>(j) *
                        std::log(std::sqrt(ell_u * ell_v) *
                                 net.conductance(u, v)) -
                    std::lgamma(static_cast<double>(j) + 1.0);
      }
    }
    cls.aggregate_log_mass = log_mass;
    dist.classes.push_back(std::move(cls));
  }
  // All classes must share one normalizing constant: probability/mass.
  double reference = 0.0;
  bool have_reference = false;
  for (const auto& cls : dist.classes) {
    const double log_ratio =
        std::log(cls.probability) - cls.aggregate_log_mass;
    if (!have_reference) {
      reference = log_ratio;
      have_reference = true;
    } else {
      dist.max_aggregation_gap = std::max(
          dist.max_aggregation_gap, std::abs(log_ratio - reference));
    }
  }
  return dist;
}

TraverseDecayReport traverse_decay_report(
    const Network& net, const std::vector<double>& local_times,
    long long traverse_cap) {
  const PathDistribution dist =
      conditioned_path_distribution(net, local_times, traverse_cap);
  TraverseDecayReport report;
  report.traverse_cap = traverse_cap;

  for (int u = 0; u < net.vertex_count(); ++u) {
    for (int v = u + 1; v < net.vertex_count(); ++v) {
      if (net.conductance(u, v) <= 0.0) continue;
      TraverseDecayReport::PairRow row;
      row.u = u;
      row.v = v;
      row.total_probability.assign(
          static_cast<std::size_t>(traverse_cap) + 2, 0.0);
      row.imbalance_probability.assign(
          static_cast<std::size_t>(traverse_cap) + 2, 0.0);
      for (const auto& entry : dist.paths) {
        long long forward = 0;
        long long backward = 0;
        for (std::size_t k = 0; k + 1 < entry.path.size(); ++k) {
          if (entry.path[k] == u && entry.path[k + 1] == v) ++forward;
          if (entry.path[k] == v && entry.path[k + 1] == u) ++backward;
        }
        row.total_probability[static_cast<std::size_t>(forward + backward)] +=
            entry.probability;
        row.imbalance_probability[static_cast<std::size_t>(
            std::abs(forward - backward))] += entry.probability;
      }
      for (long long k = 1;
           k + 1 < static_cast<long long>(row.total_probability.size());
           ++k) {
        const double below = row.total_probability[static_cast<std::size_t>(
            k - 1)];
        const double above = row.total_probability[static_cast<std::size_t>(
            k + 1)];
        if (below > 0.0) {
          TraverseDecayReport::PairRow::Ratio ratio;
          ratio.k = k;
          ratio.ratio = above / below;
          ratio.decays = ratio.ratio < 1.0;
          row.ratios.push_back(ratio);
        }
      }
      report.pairs.push_back(std::move(row));
    }
  }
  return report;
}

const EulerianMultigraph& RandomEulerianModel::sample(Rng& rng) const {
  if (atoms.empty()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "empty model support");
  }
  double u = rng.uniform();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    u -= probabilities[i];
    if (u < 0.0) return atoms[i];
  }
  return atoms.back();
}

RandomEulerianModel enumerate_random_eulerian(
    int vertex_count, const std::vector<std::vector<double>>& weights,
    long long cap) {
  if (vertex_count > 4 || cap > 8) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "exact enumeration regime is |V| <= 4, cap <= 8");
  }
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < vertex_count; ++u) {
    for (int v = 0; v < vertex_count; ++v) {
      if (u != v) slots.emplace_back(u, v);
    }
  }

  RandomEulerianModel model;
  std::vector<double> masses;
  EulerianMultigraph current(vertex_count);

  // Depth-first sweep over all multiplicity assignments with total <= cap.
  std::function<void(std::size_t, long long)> sweep =
      [&](std::size_t slot, long long used) {
        if (slot == slots.size()) {
          if (!current.eulerian()) return;
          double log_mass = std::log(static_cast<double>(arborescence_count(
              current, current.support().front())));
          for (const auto& [u, v] : slots) {
            const long long j = current.multiplicity(u, v);
            if (j == 0) continue;
            const double w =
                weights[static_cast<std::size_t>(u)]
                       [static_cast<std::size_t>(v)];
            if (w <= 0.0) return;  // zero weight kills the atom
            log_mass += static_cast<double>(j) * std::log(w) -
                        std::lgamma(static_cast<double>(j) + 1.0);
          }
          model.atoms.push_back(current);
          masses.push_back(std::exp(log_mass));
          return;
        }
        const auto [u, v] = slots[slot];
        for (long long j = 0; used + j <= cap; ++j) {
          current.set_multiplicity(u, v, j);
          sweep(slot + 1, used + j);
        }
        current.set_multiplicity(u, v, 0);
      };
  sweep(0, 0);

  if (model.atoms.empty()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "no Eulerian multigraph has positive mass");
  }
  double total = 0.0;
  for (double m : masses) total += m;
  model.probabilities.resize(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    model.probabilities[i] = masses[i] / total;
  }
  return model;
}

ThinPointReport thin_point_consistency(const Network& net, double t,
                                       std::size_t runs, std::uint64_t seed) {
  ThinPointReport report;
  report.t = t;
  report.runs = runs;

  const std::vector<std::pair<double, double>> bin_edges{
      {0.0, 1.0 / 16.0}, {1.0 / 16.0, 0.25}, {0.25, 1.0},
      {1.0, std::numeric_limits<double>::infinity()}};
  constexpr std::size_t kHistogramCap = 64;
  for (const auto& [lo, hi] : bin_edges) {
    ThinPointReport::Bin bin;
    bin.product_low = lo;
    bin.product_high = hi;
    bin.visit_histogram.assign(kHistogramCap + 1, 0);
    report.bins.push_back(bin);
  }

  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = Rng::derive(seed, r);
    const WalkTrace trace = simulate_to_inverse_local_time(net, t, rng);
    const PathStats stats = path_stats(trace);
    for (int v = 0; v < net.vertex_count(); ++v) {
      double max_product = 0.0;
      for (std::size_t i = 0; i < net.neighbors(v).size(); ++i) {
        const int u = net.neighbors(v)[i];
        const double c = net.neighbor_conductances(v)[i];
        max_product = std::max(
            max_product, trace.local_times[static_cast<std::size_t>(v)] *
                             trace.local_times[static_cast<std::size_t>(u)] *
                             c * c);
      }
      const auto k_v =
          static_cast<std::size_t>(stats.visit_counts[
              static_cast<std::size_t>(v)]);
      for (auto& bin : report.bins) {
        if (max_product >= bin.product_low && max_product < bin.product_high) {
          ++bin.visit_histogram[std::min(k_v, kHistogramCap)];
        }
      }
      const long long threshold = 1118LL * net.degree(v);
      if (max_product <= 1.0 / 16.0) {
        ++report.qualifying;
        if (stats.visit_counts[static_cast<std::size_t>(v)] <= threshold) {
          ++report.thin_given_qualifying;
        }
      }
    }
  }
  if (report.qualifying > 0) {
    report.empirical = static_cast<double>(report.thin_given_qualifying) /
                       static_cast<double>(report.qualifying);
    report.stderr_emp = binomial_stderr(report.empirical, report.qualifying);
    report.pass = report.empirical >= 0.5 - 4.0 * report.stderr_emp;
  }
  return report;
}

CycleReversalReport cycle_reversal_invariance(const Network& net, double t,
                                              std::size_t paths,
                                              std::uint64_t seed,
                                              double tolerance) {
  CycleReversalReport report;
  std::size_t attempts = 0;
  while (report.paths_tested < paths && attempts < 50 * paths) {
    Rng rng = Rng::derive(seed, attempts);
    ++attempts;
    const WalkTrace trace = simulate_to_inverse_local_time(net, t, rng);
    bool covered = true;
    for (int v = 0; v < net.vertex_count(); ++v) {
      if (v != net.root() &&
          trace.local_times[static_cast<std::size_t>(v)] <= 0.0) {
        covered = false;
      }
    }
    if (!covered || trace.embedded_path.size() < 4) continue;
    ++report.paths_tested;

    const double base =
        path_weight(trace.embedded_path, trace.local_times, net).log_value;

    // Pick a handful of internal cycles: positions i < j holding the same
    // vertex with at least one step between them.
    const auto& path = trace.embedded_path;
    std::map<int, std::vector<std::size_t>> positions;
    for (std::size_t k = 0; k < path.size(); ++k) {
      positions[path[k]].push_back(k);
    }
    int reversals = 0;
    for (const auto& [vertex, where] : positions) {
      if (where.size() < 2 || reversals >= 4) continue;
      const std::size_t i =
          where[rng.uniform_int(where.size() - 1)];
      std::size_t j = i;
      for (std::size_t candidate : where) {
        if (candidate > i + 1) {
          j = candidate;
          break;
        }
      }
      if (j <= i + 1) continue;
      std::vector<int> reversed(path);
      std::reverse(reversed.begin() + static_cast<std::ptrdiff_t>(i),
                   reversed.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      const double flipped =
          path_weight(reversed, trace.local_times, net).log_value;
      report.max_log_gap =
          std::max(report.max_log_gap, std::abs(flipped - base));
      ++reversals;
      ++report.reversals_tested;
    }
  }
  report.pass = report.max_log_gap <= tolerance && report.paths_tested > 0;
  return report;
}

WalkLawReport walk_law_consistency(double t, double ell_target,
                                   double bin_fraction, std::size_t runs,
                                   std::uint64_t seed,
                                   double tolerance_sigmas) {
  const Network net = make_path(2);
  WalkLawReport report;
  report.t = t;
  report.ell_target = ell_target;
  report.bin_fraction = bin_fraction;
  report.runs = runs;
  const double lo = ell_target * (1.0 - bin_fraction);
  const double hi = ell_target * (1.0 + bin_fraction);

  // nu_ell(k) proportional to (t*ell)^k / (k! (k-1)!), k >= 1.
  constexpr long long kMax = 40;
  const auto conditional = [&](double ell) {
    std::vector<double> weights(kMax + 1, 0.0);
    double total = 0.0;
    for (long long k = 1; k <= kMax; ++k) {
      weights[static_cast<std::size_t>(k)] = std::exp(
          static_cast<double>(k) * std::log(t * ell) -
          std::lgamma(static_cast<double>(k) + 1.0) -
          std::lgamma(static_cast<double>(k)));
      total += weights[static_cast<std::size_t>(k)];
    }
    for (auto& w : weights) w /= total;
    return weights;
  };

  std::vector<double> observed(kMax + 1, 0.0);
  std::vector<double> mixture(kMax + 1, 0.0);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = Rng::derive(seed, r);
    const WalkTrace trace = simulate_to_inverse_local_time(net, t, rng);
    const double ell = trace.local_times[1];
    if (ell < lo || ell > hi) continue;
    ++report.accepted;
    long long k = 0;
    for (std::size_t s = 0; s + 1 < trace.embedded_path.size(); ++s) {
      if (trace.embedded_path[s] == 0 && trace.embedded_path[s + 1] == 1) ++k;
    }
    if (k <= kMax) observed[static_cast<std::size_t>(k)] += 1.0;
    const auto law = conditional(ell);
    for (long long i = 1; i <= kMax; ++i) {
      mixture[static_cast<std::size_t>(i)] += law[static_cast<std::size_t>(i)];
    }
  }
  if (report.accepted == 0) {
    report.pass = false;
    return report;
  }
  const auto center = conditional(ell_target);
  for (long long k = 1; k <= kMax; ++k) {
    const double pred =
        mixture[static_cast<std::size_t>(k)] /
        static_cast<double>(report.accepted);
    if (pred * static_cast<double>(report.accepted) < 2.0 &&
        observed[static_cast<std::size_t>(k)] == 0.0) {
      continue;  // too rare to test
    }
    WalkLawReport::Row row;
    row.traverses = k;
    row.observed = observed[static_cast<std::size_t>(k)] /
                   static_cast<double>(report.accepted);
    row.predicted_mixture = pred;
    row.predicted_center = center[static_cast<std::size_t>(k)];
    row.stderr_emp = binomial_stderr(pred, report.accepted);
    row.pass = std::abs(row.observed - row.predicted_mixture) <=
               tolerance_sigmas * row.stderr_emp;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace covergff
