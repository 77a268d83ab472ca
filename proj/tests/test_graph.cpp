#include "doctest.h"

#include <cmath>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rng.hpp"

using namespace ggmpl;

namespace {

void check_consistent(const Graph& g) {
  const int p = g.node_count();
  std::int64_t degree_sum = 0;
  for (int h = 0; h < p; ++h) {
    const auto nb = g.neighbors(h);
    degree_sum += static_cast<std::int64_t>(nb.size());
    for (std::size_t t = 1; t < nb.size(); ++t) CHECK(nb[t - 1] < nb[t]);
    for (int k = 0; k < p; ++k) {
      if (k == h) continue;
      const bool listed = std::find(nb.begin(), nb.end(), k) != nb.end();
      CHECK(listed == g.has_edge(h, k));
      CHECK(g.has_edge(h, k) == g.has_edge(k, h));
    }
  }
  CHECK(degree_sum == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("canonical edge indexing is lexicographic and invertible") {
  for (int p : {2, 3, 7, 40}) {
    EdgeTable table(p);
    REQUIRE(table.size() == pair_count(p));
    std::int64_t k = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j, ++k) {
        CHECK(edge_index(p, i, j) == k);
        CHECK(table[k] == Edge{i, j});
      }
  }
}

TEST_CASE("single flip on an empty graph") {
  Graph g(3);
  g.flip(0, 1);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(1, 2));
  check_consistent(g);
}

TEST_CASE("flip is an involution") {
  Rng rng(11);
  Graph g(6);
  for (int t = 0; t < 8; ++t) {
    const auto k = uniform_index(rng, pair_count(6));
    g.flip(EdgeTable(6)[k]);
  }
  const Graph before = g;
  const EdgeTable edges(6);
  for (std::int64_t k = 0; k < edges.size(); ++k) CHECK(flip_edge(flip_edge(g, edges[k]), edges[k]) == before);
}

TEST_CASE("adjacency after random flips equals per-edge flip parity") {
  const int p = 5;
  EdgeTable edges(p);
  Rng rng(2024);
  Graph g(p);
  std::vector<int> parity(static_cast<std::size_t>(edges.size()), 0);
  for (int t = 0; t < 100; ++t) {
    const auto k = uniform_index(rng, edges.size());
    parity[static_cast<std::size_t>(k)] ^= 1;
    g.flip(edges[k]);
    check_consistent(g);
  }
  std::int64_t count = 0;
  for (std::int64_t k = 0; k < edges.size(); ++k) {
    CHECK(g.has_edge(edges[k].i, edges[k].j) == (parity[static_cast<std::size_t>(k)] == 1));
    count += parity[static_cast<std::size_t>(k)];
  }
  CHECK(g.edge_count() == count);
}

TEST_CASE("flip touches only the two endpoint neighbor lists") {
  Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}});
  const Graph before = g;
  g.flip(0, 3);
  for (int h : {1, 2, 4}) {
    const auto a = g.neighbors(h);
    const auto b = before.neighbors(h);
    CHECK(std::vector<int>(a.begin(), a.end()) == std::vector<int>(b.begin(), b.end()));
  }
}

TEST_CASE("edge list views and constructors") {
  const std::vector<Edge> list{{0, 2}, {1, 3}, {0, 1}};
  Graph g = Graph::from_edges(4, list);
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}});
  CHECK(Graph::complete(4).edge_count() == 6);
  check_consistent(Graph::complete(4));
  CHECK_THROWS_AS(Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 0}}), Error);
}

TEST_CASE("invalid node indices are rejected") {
  Graph g(3);
  CHECK_THROWS_AS(g.flip(0, 3), Error);
  CHECK_THROWS_AS(g.flip(-1, 2), Error);
  CHECK_THROWS_AS(g.flip(1, 1), Error);
  CHECK_THROWS_AS((void)g.has_edge(0, 5), Error);
  try {
    g.flip(0, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  CHECK_THROWS_AS(Graph(0), Error);
}

TEST_CASE("prior log ratios") {
  CHECK(GraphPrior(0.5).log_ratio(0, true) == 0.0);
  CHECK(GraphPrior(0.2).log_ratio(3, true) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(GraphPrior(0.2).log_ratio(3, true) == doctest::Approx(-1.3863).epsilon(1e-4));
  for (double beta : {0.01, 0.2, 0.37, 0.5, 0.9}) {
    const GraphPrior prior(beta);
    CHECK(prior.log_ratio(0, true) + prior.log_ratio(0, false) == 0.0);
    CHECK(prior.log_ratio(0, true) == -prior.log_ratio(0, false));
  }
  CHECK_THROWS_AS(GraphPrior(0.0), Error);
  CHECK_THROWS_AS(GraphPrior(1.0), Error);
}

TEST_CASE("per-edge prior overrides") {
  const GraphPrior prior(0.2, {0.5, 0.2, 0.8});
  CHECK(prior.has_overrides());
  CHECK(prior.log_ratio(0, true) == 0.0);
  CHECK(prior.log_ratio(2, true) == doctest::Approx(std::log(4.0)));
  CHECK(prior.log_ratio(2, true) == -prior.log_ratio(2, false));
  CHECK_THROWS_AS(GraphPrior(0.2, {0.5, 1.0}), Error);
}

TEST_CASE("the Bernoulli prior sums to one over all graphs") {
  for (int p = 2; p <= 4; ++p) {
    for (double beta : {0.2, 0.5, 0.73}) {
      const GraphPrior prior(beta);
      const EdgeTable edges(p);
      double total = 0.0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
        Graph g(p);
        for (std::int64_t k = 0; k < edges.size(); ++k)
          if (mask >> k & 1U) g.flip(edges[k]);
        total += std::exp(prior.log_density(g));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
