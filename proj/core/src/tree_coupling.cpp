#include "covergff/tree_coupling.hpp"

#include <algorithm>
#include <cmath>

#include "covergff/spectral.hpp"
#include "covergff/stats.hpp"
#include "covergff/walk.hpp"

namespace covergff {

CompoundPoissonExponential::CompoundPoissonExponential(double rate)
    : rate_(rate) {
  if (rate < 0.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "compound Poisson rate must be nonnegative");
  }
  normal_approx_ = rate > 700.0;
  if (rate == 0.0) {
    atom_ = 1.0;
    return;
  }
  if (!normal_approx_) {
    // Poisson weights until the remaining tail mass drops below 1e-14.
    atom_ = std::exp(-rate);
    double term = atom_;
    double cumulative = atom_;
    for (int k = 1; cumulative < 1.0 - 1e-14 || k < rate; ++k) {
      term *= rate / static_cast<double>(k);
      mixture_.push_back(term);
      cumulative += term;
      if (k > 4 * rate + 200) break;
    }
  } else {
    // Normal approximation of the Poisson count with continuity
    // correction; the sub-1e-14 central-range tail is renormalized away.
    const double sd = std::sqrt(rate);
    const auto lo = static_cast<long long>(
        std::max(1.0, std::floor(rate - 10.0 * sd)));
    const auto hi = static_cast<long long>(std::ceil(rate + 10.0 * sd));
    atom_ = 0.0;
    mixture_.assign(static_cast<std::size_t>(hi), 0.0);
    double mass = 0.0;
    for (long long k = lo; k <= hi; ++k) {
      const double w =
          normal_cdf((static_cast<double>(k) + 0.5 - rate) / sd) -
          normal_cdf((static_cast<double>(k) - 0.5 - rate) / sd);
      mixture_[static_cast<std::size_t>(k - 1)] = w;
      mass += w;
    }
    for (auto& w : mixture_) w /= mass;
  }
}

double CompoundPoissonExponential::cdf(double x) const {
  if (x < 0.0) return 0.0;
  double total = atom_;
  if (mixture_.empty()) return total;
  if (x <= 700.0) {
    // Regularized lower incomplete gamma P(k, x) by downward recurrence:
    // P(k+1, x) = P(k, x) - e^{-x} x^k / k!.
    double gamma_cdf = 1.0 - std::exp(-x);  // P(1, x)
    double density_term = std::exp(-x);     // e^{-x} x^0 / 0!
    for (std::size_t k = 1; k <= mixture_.size(); ++k) {
      total += mixture_[k - 1] * gamma_cdf;
      density_term *= x / static_cast<double>(k);
      gamma_cdf -= density_term;
      if (gamma_cdf < 0.0) gamma_cdf = 0.0;
    }
  } else {
    // e^{-x} underflows; Wilson-Hilferty per component (this regime is
    // only reachable alongside the flagged normal-approximated mixture).
    for (std::size_t k = 1; k <= mixture_.size(); ++k) {
      if (mixture_[k - 1] == 0.0) continue;
      const double kd = static_cast<double>(k);
      const double z = 3.0 * std::sqrt(kd) *
                       (std::cbrt(x / kd) - 1.0 + 1.0 / (9.0 * kd));
      total += mixture_[k - 1] * normal_cdf(z);
    }
  }
  return std::min(total, 1.0);
}

double CompoundPoissonExponential::quantile(double u) const {
  if (u <= atom_) return 0.0;
  double lo = 0.0;
  double hi = rate_ + 10.0 * std::sqrt(rate_ + 1.0) + 40.0;
  while (cdf(hi) < u) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CompoundPoissonExponential::sample(Rng& rng) const {
  const std::uint64_t n = rng.poisson(rate_);
  if (n == 0) return 0.0;
  if (n == 1) return rng.exponential();
  return rng.gamma(static_cast<double>(n));
}

namespace {

const TreeStructure& require_unit_tree(const Network& net,
                                       std::optional<TreeStructure>& slot) {
  slot = tree_structure(net);
  if (!slot || !net.has_unit_conductances()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "operation requires a unit-conductance tree");
  }
  return *slot;
}

}  // namespace

LocalTimeField recursive_local_time_sampler(const Network& tree, double t,
                                            Rng& rng) {
  if (t < 0.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "root budget must be nonnegative");
  }
  std::optional<TreeStructure> slot;
  const TreeStructure& structure = require_unit_tree(tree, slot);

  LocalTimeField field;
  field.t = t;
  field.ell.assign(static_cast<std::size_t>(tree.vertex_count()), 0.0);
  field.ell[static_cast<std::size_t>(tree.root())] = t;
  for (int v : structure.bfs_order) {
    if (v == tree.root()) continue;
    const double parent_time =
        field.ell[static_cast<std::size_t>(
            structure.parent[static_cast<std::size_t>(v)])];
    if (parent_time <= 0.0) continue;  // nothing reaches below a dry vertex
    const std::uint64_t n = rng.poisson(parent_time);
    if (n == 0) continue;
    field.ell[static_cast<std::size_t>(v)] =
        n == 1 ? rng.exponential() : rng.gamma(static_cast<double>(n));
  }
  return field;
}

LocalTimeField recursive_local_time_sampler(const Network& tree, double t,
                                            std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0, 0);
  return recursive_local_time_sampler(tree, t, rng);
}

CoupledSample coupled_sampler(const Network& tree, double t, Rng& rng) {
  if (t < 0.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "root budget must be nonnegative");
  }
  std::optional<TreeStructure> slot;
  const TreeStructure& structure = require_unit_tree(tree, slot);

  CoupledSample out;
  out.local_times.t = t;
  out.local_times.ell.assign(static_cast<std::size_t>(tree.vertex_count()),
                             0.0);
  out.field.assign(static_cast<std::size_t>(tree.vertex_count()), 0.0);
  out.local_times.ell[static_cast<std::size_t>(tree.root())] = t;

  for (int v : structure.bfs_order) {
    if (v == tree.root()) continue;
    const auto parent = static_cast<std::size_t>(
        structure.parent[static_cast<std::size_t>(v)]);
    const double parent_ell = out.local_times.ell[parent];
    const double u = rng.uniform_open();
    out.field[static_cast<std::size_t>(v)] =
        out.field[parent] + normal_quantile(u);
    if (parent_ell > 0.0) {
      // Shared uniform: the Gaussian's quantile dominates the compound
      // law's quantile, which is what keeps sqrt(ell) below the shifted
      // field pointwise.
      const CompoundPoissonExponential law(parent_ell);
      out.local_times.ell[static_cast<std::size_t>(v)] = law.quantile(u);
    }
  }
  return out;
}

CoupledSample coupled_sampler(const Network& tree, double t,
                              std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0, 0);
  return coupled_sampler(tree, t, rng);
}

bool domination_holds(const Network& tree, double t,
                      const CoupledSample& sample) {
  const double shift = std::sqrt(2.0 * t);
  const auto root = static_cast<std::size_t>(tree.root());
  // The root is pinned at the exact boundary: ell = t, field = 0.
  if (sample.local_times.ell[root] != t || sample.field[root] != 0.0) {
    return false;
  }
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (v == tree.root()) continue;
    const double ell = sample.local_times.ell[static_cast<std::size_t>(v)];
    const double top =
        std::max(sample.field[static_cast<std::size_t>(v)] + shift, 0.0);
    // Squared form of sqrt(ell) <= max(eta + sqrt(2t), 0)/sqrt(2).
    if (ell > 0.5 * top * top) return false;
  }
  return true;
}

TreeConcentrationReport tree_concentration_experiment(
    const Network& tree, std::size_t runs, std::uint64_t seed,
    std::size_t sup_samples, const std::vector<double>& lambdas) {
  if (!is_tree(tree)) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "concentration experiment requires a tree");
  }
  TreeConcentrationReport report;
  report.runs = runs;

  const SupStatistics sup = estimate_sup(tree, sup_samples, seed);
  report.mean_sup = sup.mean_sup;
  report.sup_stderr = sup.stderr_mean;
  report.tree_diameter = resistance_diameter(tree);
  const double edges = static_cast<double>(tree.edge_count());
  report.predicted_cover = edges * sup.mean_sup * sup.mean_sup;
  report.t_hit = max_hitting_time(tree);

  std::vector<double> covers(runs);
  MeanVar acc;
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = Rng::derive(seed, 1, r);
    covers[r] = simulate_cover_time(tree, tree.root(), rng).cover_time;
    acc.add(covers[r]);
  }
  report.mean_cover = acc.mean();
  report.sd_cover = acc.stddev();

  const double scale = edges * std::sqrt(report.tree_diameter) * sup.mean_sup;
  const double normalized_scale =
      std::sqrt(report.predicted_cover * report.t_hit);
  for (double lambda : lambdas) {
    TreeConcentrationReport::TailRow row;
    row.lambda = lambda;
    row.threshold = lambda * scale;
    row.normalized_threshold = lambda * normalized_scale;
    std::size_t hits = 0;
    std::size_t normalized_hits = 0;
    for (double c : covers) {
      const double gap = std::abs(c - report.predicted_cover);
      if (gap >= row.threshold) ++hits;
      if (gap >= row.normalized_threshold) ++normalized_hits;
    }
    row.empirical = static_cast<double>(hits) / static_cast<double>(runs);
    row.normalized_empirical =
        static_cast<double>(normalized_hits) / static_cast<double>(runs);
    row.stderr_emp = binomial_stderr(row.empirical, runs);
    report.tails.push_back(row);
  }
  for (std::size_t i = 1; i < report.tails.size(); ++i) {
    if (report.tails[i].empirical > report.tails[i - 1].empirical) {
      report.tails_nonincreasing = false;
    }
  }

  // Log-linear fit over rows with positive tail mass.
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  std::size_t m = 0;
  for (const auto& row : report.tails) {
    if (row.empirical <= 0.0) continue;
    const double y = std::log(row.empirical);
    sx += row.lambda;
    sy += y;
    sxx += row.lambda * row.lambda;
    sxy += row.lambda * y;
    ++m;
  }
  report.fitted_points = m;
  if (m >= 2) {
    report.fitted_log_slope =
        (static_cast<double>(m) * sxy - sx * sy) /
        (static_cast<double>(m) * sxx - sx * sx);
  }
  return report;
}

}  // namespace covergff
