#pragma once

#include <Eigen/Dense>
#include <vector>

#include "covergff/network.hpp"

namespace covergff {

/// Conductance Laplacian: L_{uu} = c_u - c_{uu}, L_{uv} = -c_{uv}.
/// Self-loops cancel out of the Laplacian entirely.
Eigen::MatrixXd laplacian(const Network& net);

/// Laplacian with the rows/columns of `ground` deleted; positive definite
/// for any connected network and nonempty ground set.
struct GroundedLaplacian {
  Eigen::MatrixXd matrix;
  /// kept[i] = original vertex index of row i.
  std::vector<int> kept;
  std::vector<int> ground;
};

GroundedLaplacian grounded_laplacian(const Network& net,
                                     const std::vector<int>& ground);

/// Effective resistance between two vertices; 0 iff u == v.
double effective_resistance(const Network& net, int u, int v);

/// R_eff(v, S): the conditional variance of the field at v given its
/// values on S. Requires v outside the nonempty set S.
double effective_resistance_to_set(const Network& net, int v,
                                   const std::vector<int>& target_set);

/// Resistance diameter max_{u,v} R_eff(u, v).
double resistance_diameter(const Network& net);

/// Schur complement of the Laplacian onto `keep` (which must contain the
/// root and at least two vertices). Preserves every c_v on the kept set
/// and all pairwise effective resistances; conductance shed by eliminated
/// vertices reappears as self-loops.
Network reduce_network(const Network& net, const std::vector<int>& keep);

/// Expected hitting time of v from u for the continuous-time walk
/// (equal to the expected embedded step count: holding times have mean 1).
double hitting_time(const Network& net, int u, int v);

/// All ordered pairs at once through the Laplacian pseudoinverse.
Eigen::MatrixXd hitting_time_matrix(const Network& net);

double max_hitting_time(const Network& net);

/// Covariance of the field pinned to zero at the root, with its lower
/// Cholesky factor. cov(v,v) = R_eff(root, v) and
/// cov(u,u) + cov(v,v) - 2 cov(u,v) = R_eff(u, v).
struct GffCovariance {
  Eigen::MatrixXd cov;     // n x n, root row/col identically zero
  Eigen::MatrixXd factor;  // lower triangular, factor * factor^T = cov
  double jitter = 0.0;     // diagonal jitter the factorization needed
};

GffCovariance gff_covariance(const Network& net);

}  // namespace covergff
