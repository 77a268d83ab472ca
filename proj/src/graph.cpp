#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace ggmpl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PositiveDefinitenessViolated: return "PositiveDefinitenessViolated";
    case ErrorCode::SampleSizeTooSmall: return "SampleSizeTooSmall";
    case ErrorCode::DegenerateChain: return "DegenerateChain";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::InfeasibleEdgeCount: return "InfeasibleEdgeCount";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

EdgeTable::EdgeTable(int p) : p_(p) {
  require(p >= 1, "node count must be >= 1");
  pairs_.reserve(static_cast<std::size_t>(pair_count(p)));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) pairs_.push_back({i, j});
}

Graph::Graph(int p)
    : p_(p),
      adjacency_(static_cast<std::size_t>(p) * static_cast<std::size_t>(p > 0 ? p : 0), 0),
      neighbors_(static_cast<std::size_t>(p > 0 ? p : 0)) {
  require(p >= 1, "node count must be >= 1, got " + std::to_string(p));
}

Graph Graph::from_edges(int p, std::span<const Edge> edges) {
  Graph g(p);
  for (const Edge& e : edges) {
    const int i = std::min(e.i, e.j);
    const int j = std::max(e.i, e.j);
    g.check_pair(i, j);
    if (g.has_edge(i, j))
      fail(ErrorCode::InvalidArgument,
           "duplicate edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    g.flip(i, j);
  }
  return g;
}

Graph Graph::complete(int p) {
  Graph g(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) g.flip(i, j);
  return g;
}

void Graph::check_pair(int i, int j) const {
  if (i < 0 || j >= p_ || i >= j)
    fail(ErrorCode::InvalidArgument, "edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                         ") out of range for p=" + std::to_string(p_));
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  check_pair(i, j);
  return adjacency_[cell(i, j)] != 0;
}

namespace {

void toggle_sorted(std::vector<int>& list, int value, bool insert) {
  auto it = std::lower_bound(list.begin(), list.end(), value);
  if (insert)
    list.insert(it, value);
  else
    list.erase(it);
}

}  // namespace

void Graph::flip(int i, int j) {
  if (i > j) std::swap(i, j);
  check_pair(i, j);
  const bool insert = adjacency_[cell(i, j)] == 0;
  adjacency_[cell(i, j)] = adjacency_[cell(j, i)] = insert ? 1 : 0;
  toggle_sorted(neighbors_[static_cast<std::size_t>(i)], j, insert);
  toggle_sorted(neighbors_[static_cast<std::size_t>(j)], i, insert);
  edge_count_ += insert ? 1 : -1;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int i = 0; i < p_; ++i)
    for (int j : neighbors(i))
      if (j > i) out.push_back({i, j});
  return out;
}

Graph flip_edge(Graph g, Edge e) {
  g.flip(e);
  return g;
}

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    fail(ErrorCode::InvalidArgument, "edge prior probability must lie in (0, 1), got " + std::to_string(beta));
}

}  // namespace

GraphPrior::GraphPrior(double beta) : beta_(beta) {
  check_beta(beta);
  log_odds_ = std::log(beta) - std::log1p(-beta);
}

GraphPrior::GraphPrior(double beta, std::vector<double> per_edge) : GraphPrior(beta) {
  per_edge_ = std::move(per_edge);
  per_edge_log_odds_.reserve(per_edge_.size());
  for (double b : per_edge_) {
    check_beta(b);
    per_edge_log_odds_.push_back(std::log(b) - std::log1p(-b));
  }
}

double GraphPrior::log_ratio(std::int64_t edge, bool birth) const noexcept {
  const double odds = per_edge_.empty() ? log_odds_ : per_edge_log_odds_[static_cast<std::size_t>(edge)];
  return birth ? odds : -odds;
}

double GraphPrior::log_density(const Graph& g) const {
  const int p = g.node_count();
  if (!per_edge_.empty() && static_cast<std::int64_t>(per_edge_.size()) != pair_count(p))
    fail(ErrorCode::DimensionMismatch, "per-edge prior length does not match graph");
  double total = 0.0;
  std::int64_t k = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j, ++k) {
      const double b = beta(k);
      total += g.has_edge(i, j) ? std::log(b) : std::log1p(-b);
    }
  }
  return total;
}

}  // namespace ggmpl
