#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "mpl.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace ggmpl;

namespace {

std::vector<int> as_vector(std::span<const int> s) { return {s.begin(), s.end()}; }

double fresh_total(const SufficientStats& stats, const Graph& g) {
  double total = 0.0;
  for (int h = 0; h < g.node_count(); ++h) total += log_node_mpl(stats, h, g.neighbors(h));
  return total;
}

}  // namespace

TEST_CASE("empty neighborhood with unit Gram entry and n = 2") {
  Eigen::MatrixXd u(1, 1);
  u << 1.0;
  const SufficientStats stats(2, u);
  const double expected = -std::log(std::numbers::pi) - 0.5 * std::log(2.0);
  CHECK(log_node_mpl(stats, 0, {}) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(log_node_mpl(stats, 0, {}) == doctest::Approx(-1.49130).epsilon(1e-5));
}

TEST_CASE("unit variance and empty neighborhood leaves only the constant") {
  for (std::int64_t n : {3, 10, 250}) {
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(2, 2);
    const SufficientStats stats(n, u);
    CHECK(log_node_mpl(stats, 1, {}) == doctest::Approx(stats.log_constant(0)).epsilon(1e-15));
  }
}

TEST_CASE("node score matches the cofactor-determinant oracle") {
  const Eigen::MatrixXd x = fixture::correlated_data(50, 4, 7);
  const SufficientStats stats = SufficientStats::from_data(x);
  const Eigen::MatrixXd u = x.transpose() * x;
  CHECK(log_node_mpl(stats, 0, std::vector<int>{1, 2}) ==
        doctest::Approx(oracle::node_mpl(50, u, 0, {1, 2})).epsilon(1e-12));
  // Every node and every neighborhood on four variables.
  for (int h = 0; h < 4; ++h)
    for (unsigned mask = 0; mask < 16; ++mask) {
      if (mask >> h & 1U) continue;
      std::vector<int> nb;
      for (int k = 0; k < 4; ++k)
        if (mask >> k & 1U) nb.push_back(k);
      CHECK(log_node_mpl(stats, h, nb) == doctest::Approx(oracle::node_mpl(50, u, h, nb)).epsilon(1e-12));
    }
}

TEST_CASE("neighbor order does not matter") {
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(40, 6, 3));
  const double a = log_node_mpl(stats, 2, std::vector<int>{0, 4, 5});
  CHECK(log_node_mpl(stats, 2, std::vector<int>{5, 0, 4}) == a);
  CHECK(log_node_mpl(stats, 2, std::vector<int>{4, 5, 0}) == a);
}

TEST_CASE("node score errors") {
  const SufficientStats small = SufficientStats::from_data(fixture::correlated_data(2, 4, 1));
  try {
    (void)log_node_mpl(small, 0, std::vector<int>{1, 2});
    FAIL("expected SampleSizeTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SampleSizeTooSmall);
  }
  Eigen::MatrixXd x = fixture::correlated_data(30, 3, 2);
  x.col(2) = x.col(1);
  const SufficientStats singular = SufficientStats::from_data(x);
  try {
    (void)log_node_mpl(singular, 0, std::vector<int>{1, 2});
    FAIL("expected PositiveDefinitenessViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PositiveDefinitenessViolated);
  }
  const SufficientStats ok = SufficientStats::from_data(fixture::correlated_data(30, 3, 2));
  CHECK_THROWS_AS((void)log_node_mpl(ok, 0, std::vector<int>{0}), Error);
  CHECK_THROWS_AS((void)log_node_mpl(ok, 0, std::vector<int>{1, 1}), Error);
  CHECK_THROWS_AS((void)log_node_mpl(ok, 3, std::vector<int>{}), Error);
}

TEST_CASE("sufficient statistics validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(SufficientStats(10, asym), Error);
  Eigen::MatrixXd neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(SufficientStats(10, neg), Error);
  CHECK_THROWS_AS(SufficientStats(0, Eigen::MatrixXd::Identity(2, 2)), Error);
}

TEST_CASE("Bayes factors of reciprocal moves cancel") {
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(60, 7, 5));
  Rng rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    Graph g = fixture::random_graph(7, 0.3, rng);
    const Edge e = EdgeTable(7)[uniform_index(rng, pair_count(7))];
    const double forward = log_bayes_factor(stats, g, e);
    const double backward = log_bayes_factor(stats, flip_edge(g, e), e);
    CHECK(forward + backward == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("Bayes factor equals the full-product difference on every 3-node graph") {
  const Eigen::MatrixXd x = fixture::correlated_data(20, 3, 12, 0.8);
  const SufficientStats stats = SufficientStats::from_data(x);
  const Eigen::MatrixXd u = x.transpose() * x;
  const auto full = [&](std::uint64_t mask) {
    const auto nb = oracle::neighbors_of_mask(3, mask);
    double total = 0.0;
    for (int h = 0; h < 3; ++h) total += oracle::node_mpl(20, u, h, nb[static_cast<std::size_t>(h)]);
    return total;
  };
  const EdgeTable edges(3);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    Graph g(3);
    for (std::int64_t k = 0; k < 3; ++k)
      if (mask >> k & 1U) g.flip(edges[k]);
    for (std::int64_t k = 0; k < 3; ++k) {
      const double expected = full(mask ^ (std::uint64_t{1} << k)) - full(mask);
      CHECK(log_bayes_factor(stats, g, edges[k]) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("independent columns give a negative Bayes factor for the edge") {
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(10000, 2, 77, 0.0));
  CHECK(log_bayes_factor(stats, Graph(2), Edge{0, 1}) < 0.0);
  const SufficientStats dependent = SufficientStats::from_data(fixture::correlated_data(10000, 2, 77, 1.0));
  CHECK(log_bayes_factor(dependent, Graph(2), Edge{0, 1}) > 0.0);
}

TEST_CASE("cached Bayes factor agrees with the fresh one and guards failures") {
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(40, 6, 21));
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = fixture::random_graph(6, 0.4, rng);
    const MplCache cache(stats, g);
    const EdgeTable edges(6);
    for (std::int64_t k = 0; k < edges.size(); ++k)
      CHECK(cached_log_bayes_factor(stats, g, cache, edges[k]) ==
            doctest::Approx(log_bayes_factor(stats, g, edges[k])).epsilon(1e-12));
  }
  // n = 2 cannot support a second neighbor.
  const SufficientStats tiny = SufficientStats::from_data(fixture::correlated_data(2, 3, 8));
  Graph g(3);
  g.flip(0, 1);
  const MplCache cache(tiny, g);
  CHECK(cached_log_bayes_factor(tiny, g, cache, Edge{0, 2}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("cache refresh matches a full rebuild over 1000 flips") {
  const int p = 30;
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(200, p, 31));
  Graph g(p);
  MplCache cache(stats, g);
  const EdgeTable edges(p);
  Rng rng(101);
  for (int t = 0; t < 1000; ++t) {
    const Edge e = edges[uniform_index(rng, edges.size())];
    if (!g.has_edge(e.i, e.j) && (g.neighbors(e.i).size() > 6 || g.neighbors(e.j).size() > 6)) continue;
    const std::vector<double> before(cache.nodes().begin(), cache.nodes().end());
    g.flip(e);
    cache.refresh(stats, g, e);
    for (int h = 0; h < p; ++h) {
      if (h == e.i || h == e.j) continue;
      CHECK(cache.node(h) == before[static_cast<std::size_t>(h)]);  // untouched entries are bit-identical
    }
    if (t % 50 == 0) {
      const MplCache rebuilt(stats, g);
      for (int h = 0; h < p; ++h) CHECK(std::abs(cache.node(h) - rebuilt.node(h)) <= 1e-10);
      CHECK(std::abs(cache.total() - fresh_total(stats, g)) <= 1e-9 * p);
    }
  }
  const MplCache rebuilt(stats, g);
  for (int h = 0; h < p; ++h) CHECK(std::abs(cache.node(h) - rebuilt.node(h)) <= 1e-10);
}

TEST_CASE("flipping twice restores the cache") {
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(80, 8, 6));
  Rng rng(5);
  Graph g = fixture::random_graph(8, 0.25, rng);
  MplCache cache(stats, g);
  const MplCache original = cache;
  const Edge e{2, 6};
  g.flip(e);
  cache.refresh(stats, g, e);
  g.flip(e);
  cache.refresh(stats, g, e);
  for (int h = 0; h < 8; ++h) CHECK(cache.node(h) == doctest::Approx(original.node(h)).epsilon(1e-12));
  CHECK(std::abs(cache.total() - original.total()) <= 1e-9);
}

TEST_CASE("scaling the data shifts each node score by a fixed amount") {
  const int n = 40;
  const Eigen::MatrixXd x = fixture::correlated_data(n, 3, 17, 0.9);
  const double c = 3.7;
  const SufficientStats base = SufficientStats::from_data(x);
  const SufficientStats scaled = SufficientStats::from_data(c * x);
  const double shift = -((n - 1) / 2.0) * std::log(c * c);
  for (int h = 0; h < 3; ++h)
    for (const auto& nb : std::vector<std::vector<int>>{{}, {(h + 1) % 3}, {(h + 1) % 3, (h + 2) % 3}})
      CHECK(log_node_mpl(scaled, h, nb) - log_node_mpl(base, h, nb) == doctest::Approx(shift).epsilon(1e-9));

  const Eigen::MatrixXd u = x.transpose() * x;
  const Eigen::MatrixXd uc = (c * x).transpose() * (c * x);
  const auto a = oracle::log_pseudo_posterior(n, u, 0.5);
  const auto b = oracle::log_pseudo_posterior(n, uc, 0.5);
  CHECK(std::max_element(a.begin(), a.end()) - a.begin() == std::max_element(b.begin(), b.end()) - b.begin());
}

TEST_CASE("cache total equals the fresh sum on random graphs") {
  const int p = 12;
  const SufficientStats stats = SufficientStats::from_data(fixture::correlated_data(100, p, 19));
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Graph g = fixture::random_graph(p, 0.2, rng);
    const MplCache cache(stats, g);
    CHECK(std::abs(cache.total() - fresh_total(stats, g)) <= 1e-9 * p);
    for (int h = 0; h < p; ++h)
      CHECK(cache.node(h) == doctest::Approx(oracle::node_mpl(100, stats.gram(), h, as_vector(g.neighbors(h))))
                                 .epsilon(1e-10));
  }
}
