#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace ggmpl {

/// Truth labels and edge scores, both in canonical edge order.
struct ScoredEdges {
  std::span<const std::uint8_t> truth;
  std::span<const double> scores;

  void validate() const;
};

/// Canonical-order 0/1 indicator of g's edges.
std::vector<std::uint8_t> edge_indicator(const Graph& g);

/// Tie-corrected Mann–Whitney form of the area under the ROC curve.
double auc_roc(const ScoredEdges& se);

/// Average precision: Σ over distinct descending thresholds of precision · Δrecall.
double auc_pr(const ScoredEdges& se);

/// F1 of the prediction {e : score_e >= threshold}; 0 when precision and recall are both 0.
double f1_at(const ScoredEdges& se, double threshold);

struct PrPlusMinus {
  double pr_plus = 0.0;
  double pr_minus = 0.0;
};

/// Mean score over true edges and over true non-edges.
PrPlusMinus pr_plus_minus(const ScoredEdges& se);

/// Earliest time from which every recorded value stays within `band` of the
/// final value. `trace` holds (time, value) pairs in recording order.
double convergence_time(std::span<const std::pair<double, double>> trace, double band = 0.01);

}  // namespace ggmpl
