#include "covergff/network.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "covergff/rng.hpp"

namespace covergff {

namespace {

std::string format_conductance(double c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", c);
  return buf;
}

}  // namespace

Network::Network(int vertex_count, std::vector<Edge> edges, int root) {
  if (vertex_count <= 0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "vertex count must be positive");
  }
  if (root < 0 || root >= vertex_count) {
    throw NetworkError(NetworkErrorCode::kRootOutOfRange,
                       "root " + std::to_string(root) + " out of range");
  }
  n_ = vertex_count;
  root_ = root;

  std::map<std::pair<int, int>, double> merged;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw NetworkError(NetworkErrorCode::kParseError,
                         "edge endpoint out of range");
    }
    if (!(e.conductance > 0.0)) {
      throw NetworkError(NetworkErrorCode::kNonpositiveConductance,
                         "conductance must be positive");
    }
    auto key = std::minmax(e.u, e.v);
    merged[{key.first, key.second}] += e.conductance;
  }

  neighbors_.resize(n_);
  neighbor_c_.resize(n_);
  c_total_.assign(n_, 0.0);
  c_loop_.assign(n_, 0.0);
  edge_count_ = static_cast<int>(merged.size());
  for (const auto& [key, c] : merged) {
    const auto [u, v] = key;
    if (u == v) {
      c_loop_[u] += c;
      c_total_[u] += c;
      if (c != 2.0) unit_conductances_ = false;
    } else {
      neighbors_[u].push_back(v);
      neighbor_c_[u].push_back(c);
      neighbors_[v].push_back(u);
      neighbor_c_[v].push_back(c);
      c_total_[u] += c;
      c_total_[v] += c;
      if (c != 1.0) unit_conductances_ = false;
    }
  }
  for (int v = 0; v < n_; ++v) {
    max_degree_ = std::max(max_degree_, static_cast<int>(neighbors_[v].size()));
  }

  // Connectivity of the support (self-loops alone do not connect).
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(root_);
  seen[root_] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : neighbors_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  if (reached != n_) {
    throw NetworkError(NetworkErrorCode::kDisconnected,
                       "conductance support is not connected");
  }
}

double Network::conductance(int u, int v) const {
  if (u == v) return c_loop_[u];
  const auto& nb = neighbors_[u];
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return neighbor_c_[u][static_cast<std::size_t>(it - nb.begin())];
}

std::vector<Network::Edge> Network::sorted_edges() const {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < n_; ++u) {
    if (c_loop_[u] > 0.0) edges.push_back({u, u, c_loop_[u]});
    for (std::size_t i = 0; i < neighbors_[u].size(); ++i) {
      const int v = neighbors_[u][i];
      if (v > u) edges.push_back({u, v, neighbor_c_[u][i]});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return edges;
}

Network Network::with_root(int root) const {
  return Network(n_, sorted_edges(), root);
}

Network load_network(std::string_view text, int root) {
  std::vector<Network::Edge> edges;
  int max_vertex = -1;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    double c = 0.0;
    if (!(fields >> u)) continue;  // blank or comment-only line
    if (!(fields >> v >> c)) {
      throw NetworkError(NetworkErrorCode::kParseError,
                         "line " + std::to_string(line_no) +
                             ": expected \"u v c\"");
    }
    std::string trailing;
    if (fields >> trailing) {
      throw NetworkError(NetworkErrorCode::kParseError,
                         "line " + std::to_string(line_no) +
                             ": trailing tokens");
    }
    if (u < 0 || v < 0) {
      throw NetworkError(NetworkErrorCode::kParseError,
                         "line " + std::to_string(line_no) +
                             ": vertex indices must be nonnegative");
    }
    if (!(c > 0.0)) {
      throw NetworkError(NetworkErrorCode::kNonpositiveConductance,
                         "line " + std::to_string(line_no) +
                             ": conductance must be positive");
    }
    edges.push_back({static_cast<int>(u), static_cast<int>(v), c});
    max_vertex = std::max({max_vertex, static_cast<int>(u),
                           static_cast<int>(v)});
  }
  if (edges.empty()) {
    throw NetworkError(NetworkErrorCode::kParseError, "no edges in document");
  }
  return Network(max_vertex + 1, std::move(edges), root);
}

Network load_network_file(const std::string& path, int root) {
  std::ifstream in(path);
  if (!in) {
    throw NetworkError(NetworkErrorCode::kParseError,
                       "cannot open " + path);
  }
  std::ostringstream body;
  body << in.rdbuf();
  return load_network(body.str(), root);
}

std::string serialize_network(const Network& net) {
  std::string out;
  for (const auto& e : net.sorted_edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += ' ';
    out += format_conductance(e.conductance);
    out += '\n';
  }
  return out;
}

VertexOrdering connected_ordering(const Network& net) {
  VertexOrdering ordering;
  ordering.order.reserve(static_cast<std::size_t>(net.vertex_count()));
  std::vector<char> seen(static_cast<std::size_t>(net.vertex_count()), 0);
  std::queue<int> frontier;
  frontier.push(net.root());
  seen[static_cast<std::size_t>(net.root())] = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    ordering.order.push_back(v);
    for (int u : net.neighbors(v)) {  // ascending: neighbors are sorted
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        frontier.push(u);
      }
    }
  }
  return ordering;
}

std::optional<TreeStructure> tree_structure(const Network& net) {
  if (net.edge_count() != net.vertex_count() - 1) return std::nullopt;
  for (int v = 0; v < net.vertex_count(); ++v) {
    if (net.loop_conductance(v) > 0.0) return std::nullopt;
  }
  TreeStructure tree;
  tree.parent.assign(static_cast<std::size_t>(net.vertex_count()), -1);
  tree.depth.assign(static_cast<std::size_t>(net.vertex_count()), 0);
  tree.bfs_order = connected_ordering(net).order;
  std::vector<char> seen(static_cast<std::size_t>(net.vertex_count()), 0);
  for (int v : tree.bfs_order) {
    seen[static_cast<std::size_t>(v)] = 1;
    for (int u : net.neighbors(v)) {
      if (!seen[static_cast<std::size_t>(u)]) {
        tree.parent[static_cast<std::size_t>(u)] = v;
        tree.depth[static_cast<std::size_t>(u)] =
            tree.depth[static_cast<std::size_t>(v)] + 1;
      }
    }
  }
  return tree;
}

Network make_path(int vertices, int root) {
  std::vector<Network::Edge> edges;
  for (int i = 0; i + 1 < vertices; ++i) edges.push_back({i, i + 1, 1.0});
  return Network(vertices, std::move(edges), root);
}

Network make_star(int leaves, int root) {
  std::vector<Network::Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
  return Network(leaves + 1, std::move(edges), root);
}

Network make_complete(int vertices, int root) {
  std::vector<Network::Edge> edges;
  for (int u = 0; u < vertices; ++u) {
    for (int v = u + 1; v < vertices; ++v) edges.push_back({u, v, 1.0});
  }
  return Network(vertices, std::move(edges), root);
}

Network make_cycle(int vertices, int root) {
  std::vector<Network::Edge> edges;
  for (int i = 0; i < vertices; ++i) {
    edges.push_back({i, (i + 1) % vertices, 1.0});
  }
  return Network(vertices, std::move(edges), root);
}

Network make_binary_tree(int depth, int root) {
  const int n = (1 << (depth + 1)) - 1;
  std::vector<Network::Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({(v - 1) / 2, v, 1.0});
  return Network(n, std::move(edges), root);
}

Network make_random_tree(int vertices, std::uint64_t seed, int root) {
  if (vertices < 2) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "random tree needs at least 2 vertices");
  }
  if (vertices == 2) return Network(2, {{0, 1, 1.0}}, root);
  Rng rng(seed, 0x7265657472646e72ULL);
  const int n = vertices;
  std::vector<int> prufer(static_cast<std::size_t>(n - 2));
  for (auto& p : prufer) {
    p = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  }
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int p : prufer) ++degree[static_cast<std::size_t>(p)];
  std::vector<Network::Edge> edges;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int p : prufer) {
    for (int leaf = 0; leaf < n; ++leaf) {
      if (degree[static_cast<std::size_t>(leaf)] == 1 &&
          !used[static_cast<std::size_t>(leaf)]) {
        edges.push_back({leaf, p, 1.0});
        used[static_cast<std::size_t>(leaf)] = 1;
        --degree[static_cast<std::size_t>(p)];
        break;
      }
    }
  }
  int first = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 1 &&
        !used[static_cast<std::size_t>(v)]) {
      if (first < 0) {
        first = v;
      } else {
        edges.push_back({first, v, 1.0});
      }
    }
  }
  return Network(n, std::move(edges), root);
}

}  // namespace covergff
