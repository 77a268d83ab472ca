#pragma once

// Small data and graph generators shared by the unit tests.

#include <Eigen/Dense>

#include "graph.hpp"
#include "rng.hpp"

namespace fixture {

// n×p standard normal data plus a common factor of weight `shared`, so
// neighboring columns are correlated.
inline Eigen::MatrixXd correlated_data(int n, int p, std::uint64_t seed, double shared = 0.5) {
  ggmpl::Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  for (int r = 0; r < n; ++r) {
    const double z = ggmpl::standard_normal(rng);
    for (int c = 0; c < p; ++c) x(r, c) = ggmpl::standard_normal(rng) + shared * z * (c % 2 ? 1.0 : -0.5);
  }
  return x;
}

inline ggmpl::Graph random_graph(int p, double density, ggmpl::Rng& rng) {
  ggmpl::Graph g(p);
  const ggmpl::EdgeTable edges(p);
  for (std::int64_t k = 0; k < edges.size(); ++k)
    if (ggmpl::uniform01(rng) < density) g.flip(edges[k]);
  return g;
}

}  // namespace fixture
