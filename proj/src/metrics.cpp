#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace ggmpl {

void ScoredEdges::validate() const {
  if (truth.size() != scores.size())
    fail(ErrorCode::DimensionMismatch, "truth and score vectors differ in length");
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0)) fail(ErrorCode::InvalidArgument, "edge score outside [0, 1]");
}

std::vector<std::uint8_t> edge_indicator(const Graph& g) {
  const int p = g.node_count();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(pair_count(p)), 0);
  for (const Edge& e : g.edges()) out[static_cast<std::size_t>(edge_index(p, e.i, e.j))] = 1;
  return out;
}

namespace {

struct Counts {
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
};

Counts count_labels(const ScoredEdges& se) {
  Counts c;
  for (std::uint8_t t : se.truth) (t ? c.positives : c.negatives) += 1;
  return c;
}

// Groups of tied scores in descending order, with per-group label counts.
struct TieGroup {
  double score;
  std::int64_t positives;
  std::int64_t negatives;
};

std::vector<TieGroup> descending_groups(const ScoredEdges& se) {
  std::vector<std::size_t> order(se.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return se.scores[a] > se.scores[b]; });
  std::vector<TieGroup> groups;
  for (std::size_t idx : order) {
    const double s = se.scores[idx];
    if (groups.empty() || groups.back().score != s) groups.push_back({s, 0, 0});
    (se.truth[idx] ? groups.back().positives : groups.back().negatives) += 1;
  }
  return groups;
}

}  // namespace

double auc_roc(const ScoredEdges& se) {
  se.validate();
  const Counts c = count_labels(se);
  if (c.positives == 0 || c.negatives == 0)
    fail(ErrorCode::DegenerateLabels, "AUC-ROC needs at least one true edge and one non-edge");
  // Twice the Mann–Whitney count, in integers: a positive above a negative
  // scores 2, a tie scores 1.
  std::int64_t twice = 0;
  std::int64_t negatives_below = c.negatives;
  for (const TieGroup& g : descending_groups(se)) {
    negatives_below -= g.negatives;
    twice += g.positives * (2 * negatives_below + g.negatives);
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(c.positives) * static_cast<double>(c.negatives));
}

double auc_pr(const ScoredEdges& se) {
  se.validate();
  const Counts c = count_labels(se);
  if (c.positives == 0) fail(ErrorCode::DegenerateLabels, "AUC-PR needs at least one true edge");
  double area = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (const TieGroup& g : descending_groups(se)) {
    tp += g.positives;
    fp += g.negatives;
    if (g.positives == 0) continue;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += precision * static_cast<double>(g.positives) / static_cast<double>(c.positives);
  }
  return area;
}

double f1_at(const ScoredEdges& se, double threshold) {
  se.validate();
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (std::size_t k = 0; k < se.scores.size(); ++k) {
    const bool predicted = se.scores[k] >= threshold;
    if (predicted && se.truth[k]) ++tp;
    else if (predicted) ++fp;
    else if (se.truth[k]) ++fn;
  }
  if (tp == 0) return 0.0;
  // 2PR/(P+R) with P = tp/(tp+fp), R = tp/(tp+fn).
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

PrPlusMinus pr_plus_minus(const ScoredEdges& se) {
  se.validate();
  const Counts c = count_labels(se);
  if (c.positives == 0 || c.negatives == 0)
    fail(ErrorCode::DegenerateLabels, "Pr+/Pr- need at least one true edge and one non-edge");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t k = 0; k < se.scores.size(); ++k) (se.truth[k] ? plus : minus) += se.scores[k];
  return {plus / static_cast<double>(c.positives), minus / static_cast<double>(c.negatives)};
}

double convergence_time(std::span<const std::pair<double, double>> trace, double band) {
  require(!trace.empty(), "convergence time needs a non-empty trace");
  const double final_value = trace.back().second;
  // Absorbs the representation error of decimal bands such as 0.80 - 0.79.
  const double limit = band + 1e-12;
  std::size_t first = trace.size() - 1;
  while (first > 0 && std::abs(trace[first - 1].second - final_value) <= limit) --first;
  return trace[first].first;
}

}  // namespace ggmpl
