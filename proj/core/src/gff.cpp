#include "covergff/gff.hpp"

#include <algorithm>
#include <cmath>

#include "covergff/stats.hpp"

namespace covergff {

namespace {

constexpr std::uint64_t kMainStream = 0;
constexpr std::uint64_t kMedianStream = 1;
constexpr std::uint64_t kBootstrapStream = 2;

bool unit_tree(const Network& net) {
  return net.has_unit_conductances() && is_tree(net);
}

}  // namespace

GffSampler::GffSampler(const Network& net)
    : GffSampler(net, unit_tree(net) ? Backend::kTree : Backend::kDense) {}

GffSampler::GffSampler(const Network& net, Backend backend)
    : n_(net.vertex_count()), root_(net.root()), backend_(backend) {
  if (backend_ == Backend::kTree) {
    const auto tree = tree_structure(net);
    if (!tree || !net.has_unit_conductances()) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "tree sampler needs a unit-conductance tree");
    }
    bfs_order_ = tree->bfs_order;
    parent_ = tree->parent;
    diag_.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
      diag_[static_cast<std::size_t>(v)] =
          static_cast<double>(tree->depth[static_cast<std::size_t>(v)]);
    }
  } else {
    const GffCovariance cov = gff_covariance(net);
    factor_ = cov.factor;
    diag_.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
      diag_[static_cast<std::size_t>(v)] = cov.cov(v, v);
    }
  }
  for (double d : diag_) sigma_max_ = std::max(sigma_max_, d);
  sigma_max_ = std::sqrt(sigma_max_);
}

void GffSampler::sample_into(Rng& rng, std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(n_), 0.0);
  if (backend_ == Backend::kTree) {
    for (int v : bfs_order_) {
      if (v == root_) continue;
      out[static_cast<std::size_t>(v)] =
          out[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])] +
          rng.normal();
    }
    return;
  }
  Eigen::VectorXd z(n_);
  for (int i = 0; i < n_; ++i) z(i) = rng.normal();
  Eigen::VectorXd values = factor_ * z;
  for (int v = 0; v < n_; ++v) out[static_cast<std::size_t>(v)] = values(v);
  out[static_cast<std::size_t>(root_)] = 0.0;
}

std::vector<double> GffSampler::sample(Rng& rng) const {
  std::vector<double> out;
  sample_into(rng, out);
  return out;
}

GffSample sample_gff(const Network& net, std::uint64_t seed) {
  GffSampler sampler(net, GffSampler::Backend::kDense);
  Rng rng = Rng::derive(seed, kMainStream, 0);
  return {sampler.sample(rng), seed};
}

GffSample sample_gff_tree(const Network& net, std::uint64_t seed) {
  GffSampler sampler(net, GffSampler::Backend::kTree);
  Rng rng = Rng::derive(seed, kMainStream, 0);
  return {sampler.sample(rng), seed};
}

ConditionalLaw conditional_law(const Network& net, int v,
                               const std::vector<int>& boundary,
                               const std::vector<double>& boundary_values) {
  if (boundary.size() != boundary_values.size()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "boundary and values disagree in length");
  }
  for (int s : boundary) {
    if (s == v) {
      throw NetworkError(NetworkErrorCode::kInvalidArgument,
                         "vertex lies on the boundary");
    }
  }
  if (std::find(boundary.begin(), boundary.end(), net.root()) ==
      boundary.end()) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "boundary must contain the root");
  }

  // Reduce onto boundary + {v}: the reduced conductances at v are exactly
  // the hitting probabilities of the watched walk, and the reduced
  // departure conductance at v gives the conditional variance.
  std::vector<int> keep(boundary);
  keep.push_back(v);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const Network reduced = reduce_network(net, keep);
  int v_new = -1;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] == v) v_new = static_cast<int>(i);
  }

  ConditionalLaw law;
  const double departure = reduced.departure_conductance(v_new);
  law.variance = 1.0 / departure;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (static_cast<int>(i) == v_new) continue;
    const double c = reduced.conductance(v_new, static_cast<int>(i));
    if (c <= 0.0) continue;
    law.support.push_back(keep[i]);
    law.weights.push_back(c / departure);
    weight_sum += law.weights.back();
  }
  for (double& w : law.weights) w /= weight_sum;  // shed solver round-off

  for (std::size_t i = 0; i < law.support.size(); ++i) {
    const auto it =
        std::find(boundary.begin(), boundary.end(), law.support[i]);
    law.mean += law.weights[i] *
                boundary_values[static_cast<std::size_t>(
                    it - boundary.begin())];
  }
  return law;
}

SupStatistics estimate_sup(const Network& net, std::size_t sample_count,
                           std::uint64_t seed) {
  if (sample_count < 100) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "estimate_sup needs at least 100 samples");
  }
  const GffSampler sampler(net);
  std::vector<double> sups(sample_count);
  std::vector<double> field;
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng = Rng::derive(seed, kMainStream, i);
    sampler.sample_into(rng, field);
    sups[i] = *std::max_element(field.begin(), field.end());
  }

  SupStatistics stats;
  stats.sample_count = sample_count;
  stats.sigma_max = sampler.sigma_max();
  MeanVar acc;
  for (double s : sups) acc.add(s);
  stats.mean_sup = acc.mean();
  stats.stderr_mean = acc.stderr_mean();
  stats.median_sup = sample_median(sups);
  Rng boot = Rng::derive(seed, kBootstrapStream, 0);
  stats.median_stderr = bootstrap_median_stderr(sups, 200, boot);

  std::size_t violations = 0;
  for (double s : sups) {
    if (std::abs(s - stats.mean_sup) > 5.0 * stats.sigma_max) ++violations;
  }
  stats.concentration_violation_rate =
      static_cast<double>(violations) / static_cast<double>(sample_count);
  stats.concentration_ok = stats.concentration_violation_rate <= 1e-4;
  return stats;
}

namespace {

// Widest value of the data-dependent detection window at v.
double window_width(const Network& net, const std::vector<double>& field,
                    int v, double median, double epsilon) {
  double neighbor_gap = 0.0;
  for (int u : net.neighbors(v)) {
    neighbor_gap += std::abs(median - field[static_cast<std::size_t>(u)]);
  }
  const double degree_cap =
      neighbor_gap > 0.0
          ? std::min(1.0, static_cast<double>(net.max_degree()) / neighbor_gap)
          : 1.0;
  return epsilon * degree_cap;
}

}  // namespace

DetectionReport detection_experiment(const Network& net, double epsilon,
                                     std::size_t sample_count,
                                     std::uint64_t seed) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw NetworkError(NetworkErrorCode::kInvalidArgument,
                       "epsilon must lie in [0, 1]");
  }
  DetectionReport report;
  report.epsilon = epsilon;
  report.max_degree = net.max_degree();
  report.sample_count = sample_count;

  // Median of the sup from a dedicated pre-pass on its own stream.
  const std::size_t prepass =
      std::clamp<std::size_t>(sample_count / 10, 1000, 100000);
  const GffSampler sampler(net);
  std::vector<double> sups(prepass);
  std::vector<double> field;
  for (std::size_t i = 0; i < prepass; ++i) {
    Rng rng = Rng::derive(seed, kMedianStream, i);
    sampler.sample_into(rng, field);
    sups[i] = *std::max_element(field.begin(), field.end());
  }
  report.median_estimate = sample_median(sups);
  Rng boot = Rng::derive(seed, kBootstrapStream, 0);
  report.median_stderr = bootstrap_median_stderr(sups, 200, boot);

  const double median = report.median_estimate;
  std::size_t hits_narrow = 0;
  std::size_t hits_wide = 0;
  std::size_t sup_tail = 0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng = Rng::derive(seed, kMainStream, i);
    sampler.sample_into(rng, field);
    bool narrow = false;
    bool wide = false;
    bool tail = false;
    for (int v = 0; v < net.vertex_count(); ++v) {
      const double x = field[static_cast<std::size_t>(v)];
      if (x >= median) tail = true;
      if (x < median) continue;
      const double width = window_width(net, field, v, median, epsilon);
      if (x <= median + width) narrow = true;
      if (x <= median + 2.0 * width) wide = true;
      if (narrow && wide) break;
    }
    hits_narrow += narrow;
    hits_wide += wide;
    sup_tail += tail;
  }
  const double n = static_cast<double>(sample_count);
  report.empirical_probability = static_cast<double>(hits_narrow) / n;
  report.empirical_probability_wide = static_cast<double>(hits_wide) / n;
  report.sup_tail_probability = static_cast<double>(sup_tail) / n;
  report.empirical_stderr =
      binomial_stderr(report.empirical_probability, sample_count);
  report.bound = epsilon / std::pow(10.0, report.max_degree);
  report.bound_general = 2.0 * epsilon /
                         std::pow(10.0, report.max_degree) *
                         report.sup_tail_probability;
  report.pass = report.empirical_probability >=
                report.bound - 4.0 * report.empirical_stderr;
  return report;
}

OvershootCheck overshoot_window_check(double mu, double sigma, double eps) {
  // X ~ N(-mu, sigma^2); window [0, eps*(sigma ^ sigma^2/mu)].
  const double cap =
      mu > 0.0 ? std::min(sigma, sigma * sigma / mu) : sigma;
  const double upper = eps * cap;
  OvershootCheck check;
  check.window_probability =
      normal_cdf((upper + mu) / sigma) - normal_cdf(mu / sigma);
  check.bound = eps / 5.0 * (1.0 - normal_cdf(mu / sigma));
  check.holds = check.window_probability >= check.bound - 1e-12;
  return check;
}

}  // namespace covergff
