#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "mpl.hpp"
#include "rate_table.hpp"
#include "rng.hpp"

namespace ggmpl {

enum class Algorithm { BirthDeath, ReversibleJump };
enum class Proposal { Uniform, TwoStep };

/// R_e(G) = min{exp(log BF + log prior ratio), 1}; exactly 1 when the
/// exponent is non-negative and 0 when the Bayes factor is -inf.
double rate_from_log(double log_ratio) noexcept;

/// Rate of toggling canonical edge `k` in g.
double edge_rate(const SufficientStats& stats, const Graph& g, const MplCache& cache, const GraphPrior& prior,
                 const EdgeTable& edges, std::int64_t k) noexcept;

/// Evaluates every rate of g. With threads > 1 the edges are split into
/// contiguous blocks evaluated concurrently; the table is identical to the
/// serial one because each rate is a pure function of (stats, g, cache).
RateTable compute_all_rates(const SufficientStats& stats, const Graph& g, const MplCache& cache,
                            const GraphPrior& prior, int threads = 1);
RateTable compute_all_rates(const SufficientStats& stats, const Graph& g, const GraphPrior& prior);

/// Re-evaluates the 2p-3 rates of edges incident to either endpoint of the
/// flipped edge. `g` and `cache` must already reflect the flip. Returns the
/// number of entries recomputed.
std::int64_t update_rates(RateTable& table, const SufficientStats& stats, const Graph& g, const MplCache& cache,
                          const GraphPrior& prior, Edge flipped);

struct BdState {
  Graph graph;
  EdgeTable edges;
  MplCache cache;
  RateTable rates;

  BdState(const SufficientStats& stats, Graph g, const GraphPrior& prior, int threads = 1);
};

struct BdStep {
  double waiting_time = 0.0;
  std::int64_t edge = -1;
};

/// One birth-death event: W = 1/Σ R_e, then e drawn with probability R_e·W
/// by one uniform draw and an inverse-CDF lookup; the state is updated in place.
BdStep bd_step(BdState& state, const SufficientStats& stats, const GraphPrior& prior, Rng& rng);

/// Canonical edge indices split into present | absent blocks, for uniform
/// draws from E or Ē in constant time.
class EdgePartition {
 public:
  explicit EdgePartition(const Graph& g);
  std::int64_t present() const noexcept { return present_; }
  std::int64_t absent() const noexcept { return static_cast<std::int64_t>(order_.size()) - present_; }
  std::int64_t present_at(std::int64_t t) const { return order_[static_cast<std::size_t>(t)]; }
  std::int64_t absent_at(std::int64_t t) const { return order_[static_cast<std::size_t>(present_ + t)]; }
  void toggle(std::int64_t edge);

 private:
  void swap_slots(std::size_t a, std::size_t b);

  std::vector<std::int64_t> order_;
  std::vector<std::int64_t> slot_;
  std::int64_t present_ = 0;
};

struct RjState {
  Graph graph;
  EdgeTable edges;
  MplCache cache;
  EdgePartition partition;

  RjState(const SufficientStats& stats, Graph g);
};

struct RjStep {
  std::int64_t edge = -1;
  double acceptance = 0.0;
  bool accepted = false;
};

/// log q(G|G') - log q(G'|G) for toggling canonical edge `k` of g.
double log_proposal_ratio(Proposal proposal, const Graph& g, std::int64_t k);

/// Metropolis-Hastings acceptance probability of toggling canonical edge k.
double rj_acceptance(const SufficientStats& stats, const Graph& g, const MplCache& cache, const GraphPrior& prior,
                     const EdgeTable& edges, Proposal proposal, std::int64_t k) noexcept;

/// One reversible-jump proposal and accept/reject, applied in place.
RjStep rj_step(RjState& state, const SufficientStats& stats, const GraphPrior& prior, Proposal proposal, Rng& rng);

struct TraceRecord {
  std::int64_t iteration = 0;
  std::int64_t edge_count = 0;
  double total_logmpl = 0.0;
  double wall_seconds = 0.0;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct GraphSample {
  std::int64_t iteration = 0;
  std::vector<std::int64_t> edges;  // canonical indices
  friend bool operator==(const GraphSample&, const GraphSample&) = default;
};

enum class Termination { Completed, StoppedEarly, Degenerate };

/// Called at every checkpoint with the running edge-inclusion estimate (empty
/// while still in burn-in). Returning false stops the chain.
using CheckpointFn = std::function<bool(const TraceRecord&, std::span<const double> edge_probs)>;

struct ChainConfig {
  std::int64_t iterations = 0;
  std::int64_t burn_in = -1;  // < 0 means iterations / 2
  std::uint64_t seed = 0;
  std::optional<Graph> init_graph;  // empty graph when unset
  std::int64_t thinning = 0;        // keep every k-th post-burn-in graph; 0 keeps none
  std::int64_t checkpoint_every = 0;  // 0 means max(1, iterations / 100)
  Proposal proposal = Proposal::Uniform;
  bool record_time = true;
  int threads = 1;
  CheckpointFn on_checkpoint;
};

struct ChainResult {
  Algorithm algorithm = Algorithm::BirthDeath;
  int p = 0;
  std::vector<double> edge_weight_sum;
  double total_weight = 0.0;
  std::int64_t iterations = 0;  // iterations actually executed
  std::int64_t burn_in = 0;
  std::int64_t accepted = 0;    // reversible-jump acceptances
  std::vector<TraceRecord> trace;
  std::vector<GraphSample> samples;
  Graph final_graph;
  Termination termination = Termination::Completed;
  std::string diagnostic;
};

/// Runs S iterations of either sampler from the configured initial graph.
/// Post-burn-in states are weighted by their waiting time (birth-death) or by
/// one (reversible jump). A chain whose rates all vanish stops with
/// Termination::Degenerate and keeps the trace recorded so far.
ChainResult run_chain(Algorithm algorithm, const SufficientStats& stats, const GraphPrior& prior,
                      const ChainConfig& config);

/// P̂_e = edge_weight_sum[e] / total_weight. Throws EmptyChain when no weight was accumulated.
std::vector<double> edge_inclusion(const ChainResult& result);

/// Graph with exactly the edges whose probability is >= threshold.
Graph select_graph(int p, std::span<const double> probs, double threshold = 0.5);

}  // namespace ggmpl
