#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"

namespace ggmpl {

/// n, p and the Gram matrix U = XᵀX. Everything the pseudo-likelihood needs
/// from the data goes through this type.
class SufficientStats {
 public:
  /// `gram` must be symmetric with a non-negative diagonal.
  SufficientStats(std::int64_t n, Eigen::MatrixXd gram);

  /// U = XᵀX of an n×p data matrix (no centering).
  static SufficientStats from_data(const Eigen::MatrixXd& x);

  std::int64_t n() const noexcept { return n_; }
  int p() const noexcept { return static_cast<int>(gram_.rows()); }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  double gram(int a, int b) const noexcept { return gram_(a, b); }

  /// Graph-independent part of the node score for a neighborhood of size k:
  /// -((n-1)/2) log π + logΓ((n+k)/2) - logΓ((k+1)/2) - ((2k+1)/2) log n.
  double log_constant(int k) const noexcept { return log_constant_[static_cast<std::size_t>(k)]; }

 private:
  std::int64_t n_;
  Eigen::MatrixXd gram_;
  std::vector<double> log_constant_;
};

enum class ScoreStatus { Ok, SampleSizeTooSmall, NotPositiveDefinite };

/// Evaluates the local fractional marginal pseudo-likelihood of node h given a
/// sorted, duplicate-free neighbor list. Never throws; on failure `out` is -inf.
ScoreStatus score_node(const SufficientStats& stats, int h, std::span<const int> sorted_nb, double& out) noexcept;

/// log P(X_h | X_nb, G) in closed form. `nb` has set semantics: order is
/// irrelevant. Throws PositiveDefinitenessViolated or SampleSizeTooSmall.
double log_node_mpl(const SufficientStats& stats, int h, std::span<const int> nb);

/// log P̃(X|G') - log P̃(X|G) for G' = G with e toggled, from four node scores.
double log_bayes_factor(const SufficientStats& stats, const Graph& g, Edge e);

/// Per-node log-MPL of the current graph and their running total.
class MplCache {
 public:
  MplCache() = default;
  /// Scores every node of g. Throws on any failing node.
  MplCache(const SufficientStats& stats, const Graph& g);

  double node(int h) const noexcept { return node_[static_cast<std::size_t>(h)]; }
  std::span<const double> nodes() const noexcept { return node_; }
  double total() const noexcept { return total_; }

  /// Rescores i and j after g has had e toggled, adjusting the total.
  void refresh(const SufficientStats& stats, const Graph& g_post_flip, Edge e);

 private:
  std::vector<double> node_;
  double total_ = 0.0;
};

/// Guarded log Bayes factor used inside the chains: reuses the cached scores
/// of the current graph and returns -inf when the toggled neighborhood of
/// either endpoint cannot be scored (n too small or non-positive-definite).
double cached_log_bayes_factor(const SufficientStats& stats, const Graph& g, const MplCache& cache, Edge e) noexcept;

}  // namespace ggmpl
