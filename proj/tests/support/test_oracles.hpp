#pragma once

// Test-side oracles, deliberately independent of the walk engine: cover
// times through an absorbing-chain solve on the product space
// (vertex, visited set).

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "covergff/network.hpp"

namespace covergff::test_support {

/// Exact expected cover time (continuous time = expected embedded steps)
/// from `start`, by first-step analysis over states (vertex, visited set).
inline double exact_mean_cover_time(const Network& net, int start) {
  const int n = net.vertex_count();
  const int full = (1 << n) - 1;
  // Enumerate reachable, non-absorbing states.
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states;
  for (int mask = 0; mask <= full; ++mask) {
    if (mask == full) continue;
    for (int v = 0; v < n; ++v) {
      if (!(mask & (1 << v))) continue;
      index[{v, mask}] = static_cast<int>(states.size());
      states.emplace_back(v, mask);
    }
  }
  const int m = static_cast<int>(states.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m);
  for (int row = 0; row < m; ++row) {
    const auto [v, mask] = states[static_cast<std::size_t>(row)];
    system(row, row) += 1.0;
    const double c_total = net.total_conductance(v);
    // Self-loop jumps stay in the same state.
    if (net.loop_conductance(v) > 0.0) {
      system(row, row) -= net.loop_conductance(v) / c_total;
    }
    const auto& nb = net.neighbors(v);
    const auto& cs = net.neighbor_conductances(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const int u = nb[i];
      const int next_mask = mask | (1 << u);
      const double p = cs[i] / c_total;
      if (next_mask == full) continue;  // absorbed: contributes only the step
      system(row, index.at({u, next_mask})) -= p;
    }
  }
  const Eigen::VectorXd expected = system.fullPivLu().solve(rhs);
  return expected(index.at({start, 1 << start}));
}

/// Exact mean cover time of a star from its center: the embedded walk
/// alternates center/leaf, so coverage is coupon collection over leaves.
inline double star_cover_from_center(int leaves) {
  double harmonic = 0.0;
  for (int k = 1; k <= leaves; ++k) harmonic += 1.0 / k;
  return 2.0 * leaves * harmonic - 1.0;
}

}  // namespace covergff::test_support
