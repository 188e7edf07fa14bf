#include "covergff/spectral.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace covergff {

Eigen::MatrixXd laplacian(const Network& net) {
  const int n = net.vertex_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    lap(v, v) = net.departure_conductance(v);
    const auto& nb = net.neighbors(v);
    const auto& cs = net.neighbor_conductances(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      lap(v, nb[i]) = -cs[i];
    }
  }
  return lap;
}

GroundedLaplacian grounded_laplacian(const Network& net,
                                     const std::vector<int>& ground) {
  const int n = net.vertex_count();
  std::vector<char> grounded(static_cast<std::size_t>(n), 0);
  for (int g : ground) {
    if (g < 0 || g >= n) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "ground vertex out of range");
    }
    grounded[static_cast<std::size_t>(g)] = 1;
  }
  GroundedLaplacian result;
  result.ground = ground;
  for (int v = 0; v < n; ++v) {
    if (!grounded[static_cast<std::size_t>(v)]) result.kept.push_back(v);
  }
  const Eigen::MatrixXd full = laplacian(net);
  const int m = static_cast<int>(result.kept.size());
  result.matrix.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      result.matrix(i, j) = full(result.kept[static_cast<std::size_t>(i)],
                                 result.kept[static_cast<std::size_t>(j)]);
    }
  }
  return result;
}

namespace {

void check_vertex(const Network& net, int v, const char* what) {
  if (v < 0 || v >= net.vertex_count()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       std::string(what) + " out of range");
  }
}

}  // namespace

double effective_resistance(const Network& net, int u, int v) {
  check_vertex(net, u, "vertex u");
  check_vertex(net, v, "vertex v");
  if (u == v) return 0.0;
  const auto grounded = grounded_laplacian(net, {v});
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grounded.matrix.rows());
  int u_row = -1;
  for (std::size_t i = 0; i < grounded.kept.size(); ++i) {
    if (grounded.kept[i] == u) u_row = static_cast<int>(i);
  }
  rhs(u_row) = 1.0;
  const Eigen::VectorXd potential = grounded.matrix.ldlt().solve(rhs);
  return potential(u_row);
}

double effective_resistance_to_set(const Network& net, int v,
                                   const std::vector<int>& target_set) {
  check_vertex(net, v, "vertex v");
  if (target_set.empty()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "target set is empty");
  }
  for (int s : target_set) {
    check_vertex(net, s, "target vertex");
    if (s == v) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "vertex lies in the target set");
    }
  }
  const auto grounded = grounded_laplacian(net, target_set);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grounded.matrix.rows());
  int v_row = -1;
  for (std::size_t i = 0; i < grounded.kept.size(); ++i) {
    if (grounded.kept[i] == v) v_row = static_cast<int>(i);
  }
  rhs(v_row) = 1.0;
  const Eigen::VectorXd potential = grounded.matrix.ldlt().solve(rhs);
  return potential(v_row);
}

double resistance_diameter(const Network& net) {
  const GffCovariance cov = gff_covariance(net);
  const int n = net.vertex_count();
  double diameter = 0.0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      diameter = std::max(diameter,
                          cov.cov(u, u) + cov.cov(v, v) - 2.0 * cov.cov(u, v));
    }
  }
  return diameter;
}

Network reduce_network(const Network& net, const std::vector<int>& keep) {
  std::set<int> keep_set(keep.begin(), keep.end());
  if (static_cast<int>(keep_set.size()) < 2) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "keep set needs at least two vertices");
  }
  if (keep_set.count(net.root()) == 0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "keep set must contain the root");
  }
  for (int v : keep_set) check_vertex(net, v, "keep vertex");

  const std::vector<int> kept(keep_set.begin(), keep_set.end());
  std::vector<int> rest;
  for (int v = 0; v < net.vertex_count(); ++v) {
    if (keep_set.count(v) == 0) rest.push_back(v);
  }

  const Eigen::MatrixXd full = laplacian(net);
  const int k = static_cast<int>(kept.size());
  const int r = static_cast<int>(rest.size());
  Eigen::MatrixXd schur(k, k);
  if (r == 0) {
    schur = full;
  } else {
    Eigen::MatrixXd lap_kk(k, k);
    Eigen::MatrixXd lap_kr(k, r);
    Eigen::MatrixXd lap_rr(r, r);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j)
        lap_kk(i, j) = full(kept[static_cast<std::size_t>(i)],
                            kept[static_cast<std::size_t>(j)]);
      for (int j = 0; j < r; ++j)
        lap_kr(i, j) = full(kept[static_cast<std::size_t>(i)],
                            rest[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j)
        lap_rr(i, j) = full(rest[static_cast<std::size_t>(i)],
                            rest[static_cast<std::size_t>(j)]);
    }
    schur = lap_kk - lap_kr * lap_rr.ldlt().solve(lap_kr.transpose());
  }

  // Off-diagonals of the complement are the reduced edge conductances;
  // whatever each vertex lost to elimination comes back as a self-loop so
  // that total conductances survive the reduction.
  const double scale = schur.cwiseAbs().maxCoeff();
  const double drop = 1e-13 * std::max(scale, 1.0);
  std::vector<Network::Edge> edges;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double c = -schur(i, j);
      if (c > drop) edges.push_back({i, j, c});
    }
  }
  for (int i = 0; i < k; ++i) {
    double off_total = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j != i && -schur(i, j) > drop) off_total += -schur(i, j);
    }
    const double loop =
        net.total_conductance(kept[static_cast<std::size_t>(i)]) - off_total;
    if (loop > drop) edges.push_back({i, i, loop});
  }
  int new_root = 0;
  for (int i = 0; i < k; ++i) {
    if (kept[static_cast<std::size_t>(i)] == net.root()) new_root = i;
  }
  return Network(k, std::move(edges), new_root);
}

double hitting_time(const Network& net, int u, int v) {
  check_vertex(net, u, "vertex u");
  check_vertex(net, v, "vertex v");
  if (u == v) return 0.0;
  const auto grounded = grounded_laplacian(net, {v});
  Eigen::VectorXd rhs(grounded.matrix.rows());
  for (std::size_t i = 0; i < grounded.kept.size(); ++i) {
    rhs(static_cast<int>(i)) = net.total_conductance(grounded.kept[i]);
  }
  const Eigen::VectorXd times = grounded.matrix.ldlt().solve(rhs);
  for (std::size_t i = 0; i < grounded.kept.size(); ++i) {
    if (grounded.kept[i] == u) return times(static_cast<int>(i));
  }
  return 0.0;
}

Eigen::MatrixXd hitting_time_matrix(const Network& net) {
  const int n = net.vertex_count();
  const Eigen::MatrixXd lap = laplacian(net);
  const Eigen::MatrixXd ones =
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd pseudo = (lap + ones).ldlt().solve(
                                     Eigen::MatrixXd::Identity(n, n)) -
                                 ones;
  Eigen::VectorXd weights(n);
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    weights(v) = net.total_conductance(v);
    total += weights(v);
  }
  const Eigen::VectorXd moments = pseudo * weights;
  Eigen::MatrixXd hit(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      hit(u, v) =
          total * (pseudo(v, v) - pseudo(u, v)) + moments(u) - moments(v);
    }
  }
  return hit;
}

double max_hitting_time(const Network& net) {
  return hitting_time_matrix(net).maxCoeff();
}

GffCovariance gff_covariance(const Network& net) {
  const int n = net.vertex_count();
  const int root = net.root();
  const auto grounded = grounded_laplacian(net, {root});
  const int m = n - 1;
  Eigen::MatrixXd cov_minor =
      grounded.matrix.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
  // Symmetrize away solver round-off before factorizing.
  cov_minor = 0.5 * (cov_minor + cov_minor.transpose()).eval();

  GffCovariance result;
  double jitter = 0.0;
  Eigen::MatrixXd factor_minor;
  const double base = cov_minor.trace() / static_cast<double>(m);
  bool factored = false;
  // Jitter ladder: none, then 1e-12*trace/n escalating x10 up to 1e-8.
  for (int attempt = 0; attempt <= 5; ++attempt) {
    jitter = attempt == 0 ? 0.0 : std::pow(10.0, attempt - 13) * base;
    Eigen::LLT<Eigen::MatrixXd> llt(
        cov_minor + jitter * Eigen::MatrixXd::Identity(m, m));
    if (llt.info() == Eigen::Success) {
      factor_minor = llt.matrixL();
      factored = true;
      break;
    }
  }
  if (!factored) {
    std::ostringstream diag;
    diag << "covariance factorization failed after jitter " << jitter
         << " (trace " << cov_minor.trace() << ", min diagonal "
         << cov_minor.diagonal().minCoeff() << ")";
    throw NetworkError(NetworkErrorCode::kInvalidArgument, diag.str());
  }
  result.jitter = jitter;

  result.cov = Eigen::MatrixXd::Zero(n, n);
  result.factor = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    const int vi = grounded.kept[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const int vj = grounded.kept[static_cast<std::size_t>(j)];
      result.cov(vi, vj) = cov_minor(i, j);
      result.factor(vi, vj) = factor_minor(i, j);
    }
  }
  return result;
}

}  // namespace covergff
