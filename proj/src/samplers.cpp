#include "samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "error.hpp"

namespace ggmpl {

double rate_from_log(double log_ratio) noexcept {
  if (std::isnan(log_ratio)) return 0.0;
  if (log_ratio >= 0.0) return 1.0;
  return std::exp(log_ratio);
}

double edge_rate(const SufficientStats& stats, const Graph& g, const MplCache& cache, const GraphPrior& prior,
                 const EdgeTable& edges, std::int64_t k) noexcept {
  const Edge e = edges[k];
  const bool birth = !g.has_edge(e.i, e.j);
  return rate_from_log(cached_log_bayes_factor(stats, g, cache, e) + prior.log_ratio(k, birth));
}

namespace {

void check_dimensions(const SufficientStats& stats, const Graph& g, const GraphPrior& prior) {
  if (g.node_count() != stats.p())
    fail(ErrorCode::DimensionMismatch, "graph has " + std::to_string(g.node_count()) + " nodes but data has " +
                                           std::to_string(stats.p()) + " variables");
  if (prior.has_overrides()) {
    // log_density validates the override length.
    (void)prior.log_density(Graph(g.node_count()));
  }
}

}  // namespace

RateTable compute_all_rates(const SufficientStats& stats, const Graph& g, const MplCache& cache,
                            const GraphPrior& prior, int threads) {
  check_dimensions(stats, g, prior);
  const EdgeTable edges(g.node_count());
  const std::int64_t m = edges.size();
  std::vector<double> rates(static_cast<std::size_t>(m));
  auto fill = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k)
      rates[static_cast<std::size_t>(k)] = edge_rate(stats, g, cache, prior, edges, k);
  };
  const std::int64_t workers = std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(m, 1));
  if (workers == 1) {
    fill(0, m);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(fill, m * w / workers, m * (w + 1) / workers);
    for (auto& t : pool) t.join();
  }
  return RateTable(rates);
}

RateTable compute_all_rates(const SufficientStats& stats, const Graph& g, const GraphPrior& prior) {
  return compute_all_rates(stats, g, MplCache(stats, g), prior);
}

std::int64_t update_rates(RateTable& table, const SufficientStats& stats, const Graph& g, const MplCache& cache,
                          const GraphPrior& prior, Edge flipped) {
  const int p = g.node_count();
  std::int64_t touched = 0;
  auto redo = [&](int a, int b) {
    const Edge e{std::min(a, b), std::max(a, b)};
    const std::int64_t k = edge_index(p, e.i, e.j);
    const bool birth = !g.has_edge(e.i, e.j);
    table.set(k, rate_from_log(cached_log_bayes_factor(stats, g, cache, e) + prior.log_ratio(k, birth)));
    ++touched;
  };
  for (int k = 0; k < p; ++k)
    if (k != flipped.i) redo(flipped.i, k);
  for (int k = 0; k < p; ++k)
    if (k != flipped.i && k != flipped.j) redo(flipped.j, k);
  return touched;
}

BdState::BdState(const SufficientStats& stats, Graph g, const GraphPrior& prior, int threads)
    : graph(std::move(g)), edges(graph.node_count()), cache(stats, graph) {
  rates = compute_all_rates(stats, graph, cache, prior, threads);
}

BdStep bd_step(BdState& state, const SufficientStats& stats, const GraphPrior& prior, Rng& rng) {
  const double total = state.rates.sum();
  if (!(total > 0.0)) fail(ErrorCode::DegenerateChain, "all birth/death rates are zero; the chain cannot move");
  BdStep step;
  step.waiting_time = 1.0 / total;
  step.edge = state.rates.find(uniform01(rng) * total);
  const Edge e = state.edges[step.edge];
  state.graph.flip(e);
  state.cache.refresh(stats, state.graph, e);
  update_rates(state.rates, stats, state.graph, state.cache, prior, e);
  return step;
}

EdgePartition::EdgePartition(const Graph& g) {
  const int p = g.node_count();
  const std::int64_t m = pair_count(p);
  order_.reserve(static_cast<std::size_t>(m));
  slot_.resize(static_cast<std::size_t>(m));
  std::vector<std::int64_t> absent;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) (g.has_edge(i, j) ? order_ : absent).push_back(edge_index(p, i, j));
  present_ = static_cast<std::int64_t>(order_.size());
  order_.insert(order_.end(), absent.begin(), absent.end());
  for (std::size_t t = 0; t < order_.size(); ++t) slot_[static_cast<std::size_t>(order_[t])] = static_cast<std::int64_t>(t);
}

void EdgePartition::swap_slots(std::size_t a, std::size_t b) {
  std::swap(order_[a], order_[b]);
  slot_[static_cast<std::size_t>(order_[a])] = static_cast<std::int64_t>(a);
  slot_[static_cast<std::size_t>(order_[b])] = static_cast<std::int64_t>(b);
}

void EdgePartition::toggle(std::int64_t edge) {
  const auto s = static_cast<std::size_t>(slot_[static_cast<std::size_t>(edge)]);
  if (static_cast<std::int64_t>(s) < present_) {
    swap_slots(s, static_cast<std::size_t>(present_ - 1));
    --present_;
  } else {
    swap_slots(s, static_cast<std::size_t>(present_));
    ++present_;
  }
}

RjState::RjState(const SufficientStats& stats, Graph g)
    : graph(std::move(g)), edges(graph.node_count()), cache(stats, graph), partition(graph) {}

namespace {

// log q(G'|G) for a move of the given direction out of a graph with |E| = present.
double log_forward_proposal(Proposal proposal, std::int64_t present, std::int64_t total, bool birth) {
  const std::int64_t absent = total - present;
  if (proposal == Proposal::Uniform || present == 0 || absent == 0) return -std::log(static_cast<double>(total));
  return -std::log(2.0 * static_cast<double>(birth ? absent : present));
}

}  // namespace

double log_proposal_ratio(Proposal proposal, const Graph& g, std::int64_t k) {
  const std::int64_t total = pair_count(g.node_count());
  const EdgeTable edges(g.node_count());
  const Edge e = edges[k];
  const bool birth = !g.has_edge(e.i, e.j);
  const std::int64_t present = g.edge_count();
  const std::int64_t present_after = present + (birth ? 1 : -1);
  return log_forward_proposal(proposal, present_after, total, !birth) -
         log_forward_proposal(proposal, present, total, birth);
}

namespace {

double acceptance_from(const SufficientStats& stats, const Graph& g, const MplCache& cache, const GraphPrior& prior,
                       Edge e, std::int64_t k, Proposal proposal) noexcept {
  const bool birth = !g.has_edge(e.i, e.j);
  double log_alpha = cached_log_bayes_factor(stats, g, cache, e) + prior.log_ratio(k, birth);
  if (proposal == Proposal::TwoStep) {
    const std::int64_t total = pair_count(g.node_count());
    const std::int64_t present = g.edge_count();
    log_alpha += log_forward_proposal(proposal, present + (birth ? 1 : -1), total, !birth) -
                 log_forward_proposal(proposal, present, total, birth);
  }
  return rate_from_log(log_alpha);
}

}  // namespace

double rj_acceptance(const SufficientStats& stats, const Graph& g, const MplCache& cache, const GraphPrior& prior,
                     const EdgeTable& edges, Proposal proposal, std::int64_t k) noexcept {
  return acceptance_from(stats, g, cache, prior, edges[k], k, proposal);
}

RjStep rj_step(RjState& state, const SufficientStats& stats, const GraphPrior& prior, Proposal proposal, Rng& rng) {
  RjStep step;
  const std::int64_t total = state.edges.size();
  const std::int64_t present = state.partition.present();
  if (proposal == Proposal::Uniform || present == 0 || present == total) {
    step.edge = uniform_index(rng, total);
  } else if (uniform01(rng) < 0.5) {
    step.edge = state.partition.absent_at(uniform_index(rng, total - present));
  } else {
    step.edge = state.partition.present_at(uniform_index(rng, present));
  }
  const Edge e = state.edges[step.edge];
  step.acceptance = acceptance_from(stats, state.graph, state.cache, prior, e, step.edge, proposal);
  step.accepted = uniform01(rng) < step.acceptance;
  if (step.accepted) {
    state.graph.flip(e);
    state.cache.refresh(stats, state.graph, e);
    state.partition.toggle(step.edge);
  }
  return step;
}

namespace {

// Waiting-time-weighted edge occupancy, accumulated lazily: an edge's weight
// is settled when it is removed, so each iteration costs O(1) regardless of |E|.
class InclusionAccumulator {
 public:
  InclusionAccumulator(const Graph& g, const EdgeTable& edges)
      : closed_(static_cast<std::size_t>(edges.size()), 0.0),
        opened_at_(static_cast<std::size_t>(edges.size()), 0.0),
        present_(static_cast<std::size_t>(edges.size()), 0) {
    for (std::int64_t k = 0; k < edges.size(); ++k) {
      const Edge e = edges[k];
      present_[static_cast<std::size_t>(k)] = g.has_edge(e.i, e.j) ? 1 : 0;
    }
  }

  void add_weight(double w) { total_ += w; }
  double total() const noexcept { return total_; }

  void toggle(std::int64_t k) {
    const auto s = static_cast<std::size_t>(k);
    if (present_[s]) {
      closed_[s] += total_ - opened_at_[s];
      present_[s] = 0;
    } else {
      opened_at_[s] = total_;
      present_[s] = 1;
    }
  }

  double weight(std::int64_t k) const {
    const auto s = static_cast<std::size_t>(k);
    const double w = closed_[s] + (present_[s] ? total_ - opened_at_[s] : 0.0);
    return std::clamp(w, 0.0, total_);
  }

  std::vector<double> weights() const {
    std::vector<double> out(closed_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = weight(static_cast<std::int64_t>(k));
    return out;
  }

 private:
  std::vector<double> closed_;
  std::vector<double> opened_at_;
  std::vector<std::uint8_t> present_;
  double total_ = 0.0;
};

std::vector<std::int64_t> canonical_edges(const Graph& g) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) out.push_back(edge_index(g.node_count(), e.i, e.j));
  return out;
}

}  // namespace

ChainResult run_chain(Algorithm algorithm, const SufficientStats& stats, const GraphPrior& prior,
                      const ChainConfig& config) {
  const std::int64_t iterations = config.iterations;
  const std::int64_t burn_in = config.burn_in < 0 ? iterations / 2 : config.burn_in;
  require(iterations >= 1, "iteration count must be >= 1");
  require(burn_in >= 0 && burn_in < iterations, "burn-in must satisfy 0 <= burn_in < iterations");
  require(config.thinning >= 0, "thinning must be >= 0");
  require(config.checkpoint_every >= 0, "checkpoint interval must be >= 0");
  require(config.threads >= 1, "thread count must be >= 1");
  const int p = stats.p();
  require(p >= 2, "at least two variables are required");
  Graph init = config.init_graph.value_or(Graph(p));
  check_dimensions(stats, init, prior);
  const std::int64_t every =
      config.checkpoint_every > 0 ? config.checkpoint_every : std::max<std::int64_t>(1, iterations / 100);

  ChainResult result;
  result.algorithm = algorithm;
  result.p = p;
  result.burn_in = burn_in;

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    if (!config.record_time) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Rng rng(config.seed);
  std::optional<BdState> bd;
  std::optional<RjState> rj;
  if (algorithm == Algorithm::BirthDeath)
    bd.emplace(stats, std::move(init), prior, config.threads);
  else
    rj.emplace(stats, std::move(init));
  const Graph& graph = bd ? bd->graph : rj->graph;
  const MplCache& cache = bd ? bd->cache : rj->cache;
  InclusionAccumulator acc(graph, bd ? bd->edges : rj->edges);

  std::int64_t s = 0;
  for (; s < iterations; ++s) {
    const bool keep = s >= burn_in;
    if (keep && config.thinning > 0 && (s - burn_in) % config.thinning == 0)
      result.samples.push_back({s, canonical_edges(graph)});

    if (bd) {
      const double total = bd->rates.sum();
      if (!(total > 0.0)) {
        result.termination = Termination::Degenerate;
        result.diagnostic = "all birth/death rates are zero at iteration " + std::to_string(s) + " with " +
                            std::to_string(graph.edge_count()) +
                            " edges; the sample size is too small for any neighborhood to grow";
        break;
      }
      if (keep) acc.add_weight(1.0 / total);
      const BdStep step = bd_step(*bd, stats, prior, rng);
      acc.toggle(step.edge);
    } else {
      if (keep) acc.add_weight(1.0);
      const RjStep step = rj_step(*rj, stats, prior, config.proposal, rng);
      if (step.accepted) {
        acc.toggle(step.edge);
        ++result.accepted;
      }
    }

    const std::int64_t done = s + 1;
    if (done % every == 0 || done == iterations) {
      const TraceRecord rec{done, graph.edge_count(), cache.total(), elapsed()};
      result.trace.push_back(rec);
      if (config.on_checkpoint) {
        std::vector<double> probs;
        if (acc.total() > 0.0) {
          probs = acc.weights();
          for (double& v : probs) v /= acc.total();
        }
        if (!config.on_checkpoint(rec, probs)) {
          ++s;
          result.termination = Termination::StoppedEarly;
          break;
        }
      }
    }
  }

  result.iterations = s;
  if (result.termination != Termination::Completed &&
      (result.trace.empty() || result.trace.back().iteration != s) && s > 0) {
    result.trace.push_back({s, graph.edge_count(), cache.total(), elapsed()});
  }
  result.edge_weight_sum = acc.weights();
  result.total_weight = acc.total();
  result.final_graph = graph;
  return result;
}

std::vector<double> edge_inclusion(const ChainResult& result) {
  if (!(result.total_weight > 0.0))
    fail(ErrorCode::EmptyChain, "no post-burn-in weight was accumulated; edge-inclusion is undefined");
  std::vector<double> probs(result.edge_weight_sum.size());
  for (std::size_t k = 0; k < probs.size(); ++k)
    probs[k] = std::clamp(result.edge_weight_sum[k] / result.total_weight, 0.0, 1.0);
  return probs;
}

Graph select_graph(int p, std::span<const double> probs, double threshold) {
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  if (static_cast<std::int64_t>(probs.size()) != pair_count(p))
    fail(ErrorCode::DimensionMismatch, "probability vector length does not match p(p-1)/2");
  Graph g(p);
  std::int64_t k = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j, ++k)
      if (probs[static_cast<std::size_t>(k)] >= threshold) g.flip(i, j);
  return g;
}

}  // namespace ggmpl
