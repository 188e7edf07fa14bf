#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covergff {

enum class NetworkErrorCode {
  kParseError,
  kNonpositiveConductance,
  kDisconnected,
  kRootOutOfRange,
  kInvalidArgument,
};

class NetworkError : public std::runtime_error {
 public:
  NetworkError(NetworkErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  NetworkErrorCode code() const { return code_; }

 private:
  NetworkErrorCode code_;
};

/// Finite connected weighted undirected multigraph with a distinguished
/// root vertex. Conductances are symmetric and positive on edges; a
/// self-loop at v contributes its conductance once to c_v. Immutable
/// after construction, so instances can be shared across workers.
class Network {
 public:
  struct Edge {
    int u;
    int v;
    double conductance;
  };

  /// Builds a network from unordered edges; conductances for repeated
  /// pairs sum. Throws NetworkError on any invariant violation.
  Network(int vertex_count, std::vector<Edge> edges, int root);

  int vertex_count() const { return n_; }
  int root() const { return root_; }
  /// Number of distinct edges; a self-loop counts as one edge.
  int edge_count() const { return edge_count_; }

  /// c_{uv}; zero when uv is not an edge.
  double conductance(int u, int v) const;
  /// c_v = sum_u c_{uv} (self-loop counted once).
  double total_conductance(int v) const { return c_total_[v]; }
  /// Self-loop weight c_{vv}.
  double loop_conductance(int v) const { return c_loop_[v]; }
  /// c_v - c_{vv}: the rate at which the walk truly leaves v.
  double departure_conductance(int v) const { return c_total_[v] - c_loop_[v]; }

  /// Distinct neighbors u != v with c_{uv} > 0, ascending.
  const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
  const std::vector<double>& neighbor_conductances(int v) const {
    return neighbor_c_[v];
  }

  /// Max degree over distinct neighbors; self-loops excluded.
  int max_degree() const { return max_degree_; }
  int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }

  bool has_unit_conductances() const { return unit_conductances_; }

  /// Edges with u <= v, sorted; self-loops included.
  std::vector<Edge> sorted_edges() const;

  /// Same topology and conductances, different root.
  Network with_root(int root) const;

 private:
  int n_ = 0;
  int root_ = 0;
  int edge_count_ = 0;
  int max_degree_ = 0;
  bool unit_conductances_ = true;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<double>> neighbor_c_;
  std::vector<double> c_total_;
  std::vector<double> c_loop_;
};

/// Parses an edge-list document of "u v c" lines ('#' starts a comment).
/// Duplicate lines for the same unordered pair sum their conductances;
/// "u u c" lines add to the self-loop weight.
Network load_network(std::string_view text, int root = 0);

Network load_network_file(const std::string& path, int root = 0);

/// Writer: sorted "u v c" lines, conductances with 17 significant digits.
/// load(serialize(net)) reproduces conductances bit-identically.
std::string serialize_network(const Network& net);

/// Permutation of vertices starting at the root such that every vertex is
/// adjacent to an earlier one. Deterministic: BFS, ties by ascending index.
struct VertexOrdering {
  std::vector<int> order;
};

VertexOrdering connected_ordering(const Network& net);

/// Parent map of a rooted tree; parent[root] = -1.
struct TreeStructure {
  std::vector<int> parent;
  /// Vertices in BFS order from the root.
  std::vector<int> bfs_order;
  /// Depth in edges from the root.
  std::vector<int> depth;
};

/// A network is a tree iff |E| = |V|-1 with no self-loops.
std::optional<TreeStructure> tree_structure(const Network& net);

inline bool is_tree(const Network& net) {
  return tree_structure(net).has_value();
}

// Small generators used by experiments and tests.
Network make_path(int vertices, int root = 0);
Network make_star(int leaves, int root = 0);
Network make_complete(int vertices, int root = 0);
Network make_cycle(int vertices, int root = 0);
/// Full binary tree of the given depth (depth 0 = single root).
Network make_binary_tree(int depth, int root = 0);
/// Uniform random labeled tree on n vertices (Prufer sequence).
Network make_random_tree(int vertices, std::uint64_t seed, int root = 0);

}  // namespace covergff
