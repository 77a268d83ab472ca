#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ggmpl {

/// Undirected edge between 0-based nodes, normalized so that i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Number of unordered node pairs on p nodes, p(p-1)/2.
constexpr std::int64_t pair_count(int p) noexcept {
  return static_cast<std::int64_t>(p) * (p - 1) / 2;
}

/// Canonical edge index: pairs (i, j), i < j, in lexicographic order.
constexpr std::int64_t edge_index(int p, int i, int j) noexcept {
  return static_cast<std::int64_t>(i) * (2 * static_cast<std::int64_t>(p) - i - 1) / 2 + (j - i - 1);
}

/// Inverse of edge_index via a precomputed table.
class EdgeTable {
 public:
  explicit EdgeTable(int p);
  int node_count() const noexcept { return p_; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(pairs_.size()); }
  Edge operator[](std::int64_t k) const { return pairs_[static_cast<std::size_t>(k)]; }
  std::int64_t index(int i, int j) const noexcept { return edge_index(p_, i, j); }

 private:
  int p_;
  std::vector<Edge> pairs_;
};

/// Simple undirected graph on p labelled nodes. Neighbor lists are kept sorted
/// ascending and always agree with the adjacency matrix.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int p);

  static Graph from_edges(int p, std::span<const Edge> edges);
  static Graph complete(int p);

  int node_count() const noexcept { return p_; }
  std::int64_t edge_count() const noexcept { return edge_count_; }

  bool has_edge(int i, int j) const;
  std::span<const int> neighbors(int h) const { return neighbors_[static_cast<std::size_t>(h)]; }

  /// Toggles (i, j). Only the neighbor lists of i and j change.
  void flip(int i, int j);
  void flip(Edge e) { flip(e.i, e.j); }

  /// Edges in canonical order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.p_ == b.p_ && a.adjacency_ == b.adjacency_;
  }

 private:
  void check_pair(int i, int j) const;
  std::size_t cell(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(p_) + static_cast<std::size_t>(j);
  }

  int p_ = 0;
  std::int64_t edge_count_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<int>> neighbors_;
};

/// Copying form of Graph::flip.
Graph flip_edge(Graph g, Edge e);

/// Bernoulli-product prior P(G) ∝ Π β_e^{1(e∈G)} (1-β_e)^{1(e∉G)}.
class GraphPrior {
 public:
  explicit GraphPrior(double beta = 0.2);
  /// Per-edge overrides indexed canonically; must have p(p-1)/2 entries.
  GraphPrior(double beta, std::vector<double> per_edge);

  double beta() const noexcept { return beta_; }
  double beta(std::int64_t edge) const noexcept {
    return per_edge_.empty() ? beta_ : per_edge_[static_cast<std::size_t>(edge)];
  }
  bool has_overrides() const noexcept { return !per_edge_.empty(); }

  /// log(β/(1-β)) for a birth of `edge`, its negation for a death.
  double log_ratio(std::int64_t edge, bool birth) const noexcept;

  /// Unnormalized log P(G); exact for the normalized prior when no overrides.
  double log_density(const Graph& g) const;

 private:
  double beta_;
  double log_odds_;
  std::vector<double> per_edge_;
  std::vector<double> per_edge_log_odds_;
};

}  // namespace ggmpl
