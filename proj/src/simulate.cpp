#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "error.hpp"
#include "gwishart.hpp"

namespace ggmpl {

const char* to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::Random: return "random";
    case GraphKind::Cluster: return "cluster";
    case GraphKind::ScaleFree: return "scale-free";
  }
  return "unknown";
}

const char* to_string(Density density) noexcept {
  return density == Density::Sparse ? "sparse" : "dense";
}

GraphKind parse_graph_kind(const std::string& text) {
  if (text == "random") return GraphKind::Random;
  if (text == "cluster") return GraphKind::Cluster;
  if (text == "scale-free" || text == "scalefree") return GraphKind::ScaleFree;
  fail(ErrorCode::InvalidArgument, "unknown graph kind '" + text + "' (random, cluster, scale-free)");
}

Density parse_density(const std::string& text) {
  if (text == "sparse") return Density::Sparse;
  if (text == "dense") return Density::Dense;
  fail(ErrorCode::InvalidArgument, "unknown density regime '" + text + "' (sparse, dense)");
}

void InstanceSpec::validate() const {
  require(p >= 2, "p must be >= 2, got " + std::to_string(p));
  require(n >= 0, "n must be >= 1");
  require(clusters >= 0, "cluster count must be >= 1");
  require(b > 2.0, "G-Wishart shape b must exceed 2");
  if (kind == GraphKind::Cluster) {
    const int k = clusters > 0 ? clusters : default_cluster_count(p);
    require(k <= p, "more clusters than nodes");
  }
}

std::int64_t target_edge_count(int p, Density density) {
  const double a = density == Density::Sparse ? 0.5 : 2.0;
  const double b = density == Density::Sparse ? 0.005 : 0.05;
  const double count = std::max(a * p, b * static_cast<double>(pair_count(p)));
  // Snap representation error (e.g. 0.005 · 499500) before rounding half up.
  const double snapped = std::round(count * 1e6) / 1e6;
  return static_cast<std::int64_t>(std::floor(snapped + 0.5));
}

std::int64_t default_sample_size(int p, SampleLevel level) {
  require(p >= 2, "p must be >= 2");
  if (level == SampleLevel::Low && p == 1000) return 400;
  const double c = level == SampleLevel::Low ? 20.0 : 350.0;
  return static_cast<std::int64_t>(std::ceil(c * std::log10(static_cast<double>(p)) - 1e-9));
}

int default_cluster_count(int p) { return p >= 1000 ? 8 : 2; }

std::vector<int> cluster_assignment(int p, int clusters) {
  require(clusters >= 1 && clusters <= p, "cluster count must lie in [1, p]");
  std::vector<int> out(static_cast<std::size_t>(p));
  for (int h = 0; h < p; ++h)
    out[static_cast<std::size_t>(h)] = static_cast<int>(static_cast<std::int64_t>(h) * clusters / p);
  return out;
}

namespace {

// Partial Fisher–Yates: the first `count` entries become a uniform sample.
void sample_prefix(std::vector<std::int64_t>& pool, std::int64_t count, Rng& rng) {
  const auto size = static_cast<std::int64_t>(pool.size());
  for (std::int64_t t = 0; t < count; ++t) {
    const std::int64_t pick = t + uniform_index(rng, size - t);
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(pick)]);
  }
}

Graph graph_from_indices(int p, const std::vector<std::int64_t>& pool, std::int64_t count) {
  const EdgeTable edges(p);
  Graph g(p);
  for (std::int64_t t = 0; t < count; ++t) g.flip(edges[pool[static_cast<std::size_t>(t)]]);
  return g;
}

Graph scale_free_tree(int p, Rng& rng) {
  // Labels are shuffled so that arrival order does not map onto node index.
  std::vector<int> label(static_cast<std::size_t>(p));
  std::iota(label.begin(), label.end(), 0);
  for (int t = p - 1; t > 0; --t)
    std::swap(label[static_cast<std::size_t>(t)], label[static_cast<std::size_t>(uniform_index(rng, t + 1))]);
  Graph g(p);
  std::vector<int> endpoints;  // each node appears once per incident edge
  endpoints.reserve(2 * static_cast<std::size_t>(p));
  for (int t = 1; t < p; ++t) {
    const int target = t == 1 ? 0 : endpoints[static_cast<std::size_t>(uniform_index(rng, static_cast<std::int64_t>(endpoints.size())))];
    g.flip(label[static_cast<std::size_t>(t)], label[static_cast<std::size_t>(target)]);
    endpoints.push_back(t);
    endpoints.push_back(target);
  }
  return g;
}

}  // namespace

Graph gen_graph(const InstanceSpec& spec, Rng& rng) {
  spec.validate();
  const int p = spec.p;
  if (spec.kind == GraphKind::ScaleFree) return scale_free_tree(p, rng);

  const std::int64_t n_e = target_edge_count(p, spec.density);
  std::vector<std::int64_t> pool;
  if (spec.kind == GraphKind::Random) {
    pool.resize(static_cast<std::size_t>(pair_count(p)));
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
  } else {
    const int k = spec.clusters > 0 ? spec.clusters : default_cluster_count(p);
    const std::vector<int> group = cluster_assignment(p, k);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (group[static_cast<std::size_t>(i)] == group[static_cast<std::size_t>(j)]) pool.push_back(edge_index(p, i, j));
  }
  if (n_e > static_cast<std::int64_t>(pool.size()))
    fail(ErrorCode::InfeasibleEdgeCount, "requested " + std::to_string(n_e) + " edges but only " +
                                             std::to_string(pool.size()) + " admissible pairs exist");
  sample_prefix(pool, n_e, rng);
  return graph_from_indices(p, pool, n_e);
}

Eigen::MatrixXd sample_gaussian(const Eigen::MatrixXd& precision, std::int64_t n, Rng& rng) {
  require(n >= 1, "sample size must be >= 1");
  const Eigen::Index p = precision.rows();
  Eigen::LLT<Eigen::MatrixXd> k_llt(precision);
  if (k_llt.info() != Eigen::Success) fail(ErrorCode::PositiveDefinitenessViolated, "precision matrix is not positive definite");
  Eigen::MatrixXd sigma = k_llt.solve(Eigen::MatrixXd::Identity(p, p));
  sigma = 0.5 * (sigma + sigma.transpose());
  Eigen::LLT<Eigen::MatrixXd> s_llt(sigma);
  if (s_llt.info() != Eigen::Success) fail(ErrorCode::PositiveDefinitenessViolated, "covariance matrix is not positive definite");
  const Eigen::MatrixXd c = s_llt.matrixL();
  Eigen::MatrixXd z(p, n);
  for (std::int64_t r = 0; r < n; ++r)
    for (Eigen::Index v = 0; v < p; ++v) z(v, r) = standard_normal(rng);
  return (c.triangularView<Eigen::Lower>() * z).transpose();
}

Instance gen_instance(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Instance out;
  out.graph = gen_graph(spec, rng);
  const std::int64_t n = spec.n > 0 ? spec.n : default_sample_size(spec.p, SampleLevel::High);
  out.precision = sample_gwishart(out.graph, GWishartParams::identity(spec.p, spec.b), rng).K;
  out.data = sample_gaussian(out.precision, n, rng);
  return out;
}

Eigen::MatrixXd nonparanormal_transform(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  require(n >= 2, "nonparanormal transform needs at least two rows");
  const boost::math::normal standard;
  Eigen::MatrixXd out(n, p);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < p; ++c) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, c) < x(b, c); });
    if (!(x(order.front(), c) < x(order.back(), c)))
      fail(ErrorCode::ConstantColumn, "column " + std::to_string(c + 1) + " has fewer than two distinct values");
    for (Eigen::Index t = 0; t < n;) {
      Eigen::Index u = t;
      while (u + 1 < n && x(order[static_cast<std::size_t>(u + 1)], c) == x(order[static_cast<std::size_t>(t)], c)) ++u;
      // Ranks t+1 .. u+1 share their average.
      const double rank = 0.5 * static_cast<double>(t + u) + 1.0;
      const double z = boost::math::quantile(standard, rank / static_cast<double>(n + 1));
      for (Eigen::Index q = t; q <= u; ++q) out(order[static_cast<std::size_t>(q)], c) = z;
      t = u + 1;
    }
    out.col(c).array() -= out.col(c).mean();
  }
  return out;
}

}  // namespace ggmpl
