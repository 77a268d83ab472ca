#include "ggmpl/ggmpl.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "gwishart.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "mpl.hpp"
#include "samplers.hpp"
#include "simulate.hpp"

struct ggmpl_graph {
  ggmpl::Graph graph;
};

struct ggmpl_matrix {
  Eigen::MatrixXd m;
};

struct ggmpl_stats {
  ggmpl::SufficientStats stats;
};

struct ggmpl_chain {
  ggmpl::ChainResult result;
};

namespace {

thread_local std::string tl_last_error;

ggmpl_status status_of(ggmpl::ErrorCode code) {
  using ggmpl::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return GGMPL_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return GGMPL_ERR_DIMENSION_MISMATCH;
    case ErrorCode::PositiveDefinitenessViolated: return GGMPL_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::SampleSizeTooSmall: return GGMPL_ERR_SAMPLE_SIZE_TOO_SMALL;
    case ErrorCode::DegenerateChain: return GGMPL_ERR_DEGENERATE_CHAIN;
    case ErrorCode::NonConvergence: return GGMPL_ERR_NON_CONVERGENCE;
    case ErrorCode::DegenerateLabels: return GGMPL_ERR_DEGENERATE_LABELS;
    case ErrorCode::EmptyChain: return GGMPL_ERR_EMPTY_CHAIN;
    case ErrorCode::ConstantColumn: return GGMPL_ERR_CONSTANT_COLUMN;
    case ErrorCode::InfeasibleEdgeCount: return GGMPL_ERR_INFEASIBLE_EDGE_COUNT;
    case ErrorCode::Io: return GGMPL_ERR_IO;
    case ErrorCode::Parse: return GGMPL_ERR_PARSE;
  }
  return GGMPL_ERR_INTERNAL;
}

ggmpl_status set_error(ggmpl_status status, const std::string& message) {
  tl_last_error = message;
  return status;
}

template <class F>
ggmpl_status guarded(F&& body) noexcept {
  try {
    tl_last_error.clear();
    return body();
  } catch (const ggmpl::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(GGMPL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GGMPL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(GGMPL_ERR_INTERNAL, "unknown error");
  }
}

#define GGMPL_REQUIRE_PTR(ptr) \
  if ((ptr) == nullptr) return set_error(GGMPL_ERR_INVALID_ARGUMENT, #ptr " must not be NULL")

void check_length(int64_t len, int p) {
  if (len != ggmpl::pair_count(p))
    ggmpl::fail(ggmpl::ErrorCode::DimensionMismatch,
                "edge vector length " + std::to_string(len) + " != p(p-1)/2 = " + std::to_string(ggmpl::pair_count(p)));
}

ggmpl::GWishartParams params_from(double b, const ggmpl_matrix* d, int p) {
  ggmpl::GWishartParams params = d ? ggmpl::GWishartParams{b, d->m} : ggmpl::GWishartParams::identity(p, b);
  if (params.D.rows() != p) ggmpl::fail(ggmpl::ErrorCode::DimensionMismatch, "scale matrix D does not match p");
  return params;
}

}  // namespace

extern "C" {

const char* ggmpl_version(void) { return "0.1.0"; }

const char* ggmpl_last_error(void) { return tl_last_error.c_str(); }

const char* ggmpl_status_name(ggmpl_status status) {
  switch (status) {
    case GGMPL_OK: return "ok";
    case GGMPL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GGMPL_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case GGMPL_ERR_NOT_POSITIVE_DEFINITE: return "matrix not positive definite";
    case GGMPL_ERR_SAMPLE_SIZE_TOO_SMALL: return "sample size too small";
    case GGMPL_ERR_DEGENERATE_CHAIN: return "degenerate chain";
    case GGMPL_ERR_NON_CONVERGENCE: return "non-convergence";
    case GGMPL_ERR_DEGENERATE_LABELS: return "degenerate labels";
    case GGMPL_ERR_EMPTY_CHAIN: return "empty chain";
    case GGMPL_ERR_CONSTANT_COLUMN: return "constant column";
    case GGMPL_ERR_INFEASIBLE_EDGE_COUNT: return "infeasible edge count";
    case GGMPL_ERR_IO: return "I/O error";
    case GGMPL_ERR_PARSE: return "parse error";
    case GGMPL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ggmpl_status_class ggmpl_status_classify(ggmpl_status status) {
  switch (status) {
    case GGMPL_OK: return GGMPL_CLASS_OK;
    case GGMPL_ERR_INVALID_ARGUMENT:
    case GGMPL_ERR_DIMENSION_MISMATCH:
    case GGMPL_ERR_INFEASIBLE_EDGE_COUNT:
    case GGMPL_ERR_DEGENERATE_LABELS:
    case GGMPL_ERR_CONSTANT_COLUMN: return GGMPL_CLASS_VALIDATION;
    case GGMPL_ERR_IO:
    case GGMPL_ERR_PARSE: return GGMPL_CLASS_IO;
    default: return GGMPL_CLASS_RUNTIME;
  }
}

/* graphs */

ggmpl_status ggmpl_graph_create(int32_t p, ggmpl_graph** out) {
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_graph{ggmpl::Graph(p)};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_graph_clone(const ggmpl_graph* g, ggmpl_graph** out) {
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_graph{g->graph};
    return GGMPL_OK;
  });
}

void ggmpl_graph_destroy(ggmpl_graph* g) { delete g; }

int32_t ggmpl_graph_node_count(const ggmpl_graph* g) { return g ? g->graph.node_count() : 0; }

int64_t ggmpl_graph_edge_count(const ggmpl_graph* g) { return g ? g->graph.edge_count() : 0; }

ggmpl_status ggmpl_graph_has_edge(const ggmpl_graph* g, int32_t i, int32_t j, int* out) {
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = g->graph.has_edge(i, j) ? 1 : 0;
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_graph_flip(ggmpl_graph* g, int32_t i, int32_t j) {
  GGMPL_REQUIRE_PTR(g);
  return guarded([&] {
    g->graph.flip(i, j);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_graph_indicator(const ggmpl_graph* g, uint8_t* out, int64_t len) {
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, g->graph.node_count());
    const auto ind = ggmpl::edge_indicator(g->graph);
    std::copy(ind.begin(), ind.end(), out);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_graph_read(const char* path, ggmpl_graph** out) {
  GGMPL_REQUIRE_PTR(path);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_graph{ggmpl::io::read_edge_list(path)};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_graph_write(const ggmpl_graph* g, const char* path) {
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    ggmpl::io::write_edge_list(path, g->graph);
    return GGMPL_OK;
  });
}

/* matrices */

ggmpl_status ggmpl_matrix_create(int64_t rows, int64_t cols, const double* data, ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    ggmpl::require(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
    auto* m = new ggmpl_matrix{Eigen::MatrixXd::Zero(rows, cols)};
    if (data)
      for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < cols; ++c) m->m(r, c) = data[r * cols + c];
    *out = m;
    return GGMPL_OK;
  });
}

void ggmpl_matrix_destroy(ggmpl_matrix* m) { delete m; }

int64_t ggmpl_matrix_rows(const ggmpl_matrix* m) { return m ? m->m.rows() : 0; }

int64_t ggmpl_matrix_cols(const ggmpl_matrix* m) { return m ? m->m.cols() : 0; }

double ggmpl_matrix_get(const ggmpl_matrix* m, int64_t r, int64_t c) {
  if (!m || r < 0 || c < 0 || r >= m->m.rows() || c >= m->m.cols()) return 0.0;
  return m->m(r, c);
}

ggmpl_status ggmpl_matrix_copy_to(const ggmpl_matrix* m, double* out, int64_t len) {
  GGMPL_REQUIRE_PTR(m);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    if (len != m->m.rows() * m->m.cols()) ggmpl::fail(ggmpl::ErrorCode::DimensionMismatch, "buffer length mismatch");
    for (int64_t r = 0; r < m->m.rows(); ++r)
      for (int64_t c = 0; c < m->m.cols(); ++c) out[r * m->m.cols() + c] = m->m(r, c);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_data_read_csv(const char* path, ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(path);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_matrix{ggmpl::io::read_data_csv(path).values};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_data_write_csv(const ggmpl_matrix* x, const char* path) {
  GGMPL_REQUIRE_PTR(x);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    ggmpl::io::write_data_csv(path, x->m);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_matrix_read_csv(const char* path, ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(path);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_matrix{ggmpl::io::read_matrix_csv(path)};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_matrix_write_csv(const ggmpl_matrix* m, const char* path) {
  GGMPL_REQUIRE_PTR(m);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    ggmpl::io::write_matrix_csv(path, m->m);
    return GGMPL_OK;
  });
}

int ggmpl_matrix_is_positive_definite(const ggmpl_matrix* m) {
  if (!m || m->m.rows() != m->m.cols()) return 0;
  Eigen::LLT<Eigen::MatrixXd> llt(m->m);
  return llt.info() == Eigen::Success ? 1 : 0;
}

ggmpl_status ggmpl_nonparanormal(const ggmpl_matrix* x, ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(x);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_matrix{ggmpl::nonparanormal_transform(x->m)};
    return GGMPL_OK;
  });
}

/* statistics */

ggmpl_status ggmpl_stats_from_data(const ggmpl_matrix* x, ggmpl_stats** out) {
  GGMPL_REQUIRE_PTR(x);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new ggmpl_stats{ggmpl::SufficientStats::from_data(x->m)};
    return GGMPL_OK;
  });
}

void ggmpl_stats_destroy(ggmpl_stats* s) { delete s; }

int64_t ggmpl_stats_sample_size(const ggmpl_stats* s) { return s ? s->stats.n() : 0; }

int32_t ggmpl_stats_variable_count(const ggmpl_stats* s) { return s ? s->stats.p() : 0; }

ggmpl_status ggmpl_log_node_mpl(const ggmpl_stats* s, int32_t h, const int32_t* nb, int64_t nb_len, double* out) {
  GGMPL_REQUIRE_PTR(s);
  GGMPL_REQUIRE_PTR(out);
  if (nb_len > 0 && nb == nullptr) return set_error(GGMPL_ERR_INVALID_ARGUMENT, "nb must not be NULL");
  return guarded([&] {
    std::vector<int> list(nb, nb + (nb_len > 0 ? nb_len : 0));
    *out = ggmpl::log_node_mpl(s->stats, h, list);
    return GGMPL_OK;
  });
}

/* simulation */

void ggmpl_instance_spec_init(ggmpl_instance_spec* spec) {
  if (!spec) return;
  spec->p = 10;
  spec->kind = GGMPL_GRAPH_RANDOM;
  spec->density = GGMPL_SPARSE;
  spec->clusters = 0;
  spec->n = 0;
  spec->b = 3.0;
  spec->seed = 1;
}

int64_t ggmpl_target_edge_count(int32_t p, ggmpl_density density) {
  if (p < 2) return 0;
  return ggmpl::target_edge_count(p, density == GGMPL_DENSE ? ggmpl::Density::Dense : ggmpl::Density::Sparse);
}

int64_t ggmpl_default_sample_size(int32_t p, ggmpl_sample_level level) {
  if (p < 2) return 0;
  return ggmpl::default_sample_size(p, level == GGMPL_SAMPLES_LOW ? ggmpl::SampleLevel::Low : ggmpl::SampleLevel::High);
}

ggmpl_status ggmpl_simulate(const ggmpl_instance_spec* spec, ggmpl_graph** graph, ggmpl_matrix** precision,
                            ggmpl_matrix** data) {
  GGMPL_REQUIRE_PTR(spec);
  return guarded([&] {
    ggmpl::InstanceSpec s;
    s.p = spec->p;
    switch (spec->kind) {
      case GGMPL_GRAPH_RANDOM: s.kind = ggmpl::GraphKind::Random; break;
      case GGMPL_GRAPH_CLUSTER: s.kind = ggmpl::GraphKind::Cluster; break;
      case GGMPL_GRAPH_SCALE_FREE: s.kind = ggmpl::GraphKind::ScaleFree; break;
      default: ggmpl::fail(ggmpl::ErrorCode::InvalidArgument, "unknown graph kind");
    }
    s.density = spec->density == GGMPL_DENSE ? ggmpl::Density::Dense : ggmpl::Density::Sparse;
    s.clusters = spec->clusters;
    s.n = spec->n;
    s.b = spec->b;
    s.seed = spec->seed;
    ggmpl::Instance inst = ggmpl::gen_instance(s);
    if (graph) *graph = new ggmpl_graph{std::move(inst.graph)};
    if (precision) *precision = new ggmpl_matrix{std::move(inst.precision)};
    if (data) *data = new ggmpl_matrix{std::move(inst.data)};
    return GGMPL_OK;
  });
}

/* chains */

void ggmpl_chain_config_init(ggmpl_chain_config* config) {
  if (!config) return;
  config->algorithm = GGMPL_BIRTH_DEATH;
  config->iterations = 10000;
  config->burn_in = -1;
  config->seed = 1;
  config->beta = 0.2;
  config->proposal = GGMPL_PROPOSAL_UNIFORM;
  config->checkpoint_every = 0;
  config->thinning = 0;
  config->record_time = 1;
  config->threads = 1;
  config->init_graph = nullptr;
  config->on_checkpoint = nullptr;
  config->user_data = nullptr;
}

ggmpl_status ggmpl_run_chain(const ggmpl_stats* stats, const ggmpl_chain_config* config, ggmpl_chain** out) {
  GGMPL_REQUIRE_PTR(stats);
  GGMPL_REQUIRE_PTR(config);
  GGMPL_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] {
    ggmpl::ChainConfig cfg;
    cfg.iterations = config->iterations;
    cfg.burn_in = config->burn_in;
    cfg.seed = config->seed;
    cfg.thinning = config->thinning;
    cfg.checkpoint_every = config->checkpoint_every;
    cfg.proposal = config->proposal == GGMPL_PROPOSAL_TWO_STEP ? ggmpl::Proposal::TwoStep : ggmpl::Proposal::Uniform;
    cfg.record_time = config->record_time != 0;
    cfg.threads = config->threads;
    if (config->init_graph) cfg.init_graph = config->init_graph->graph;
    if (config->on_checkpoint) {
      auto fn = config->on_checkpoint;
      void* user = config->user_data;
      cfg.on_checkpoint = [fn, user](const ggmpl::TraceRecord& r, std::span<const double> probs) {
        const ggmpl_trace_record rec{r.iteration, r.edge_count, r.total_logmpl, r.wall_seconds};
        return fn(user, &rec, probs.empty() ? nullptr : probs.data(), static_cast<int64_t>(probs.size())) != 0;
      };
    }
    const auto algorithm =
        config->algorithm == GGMPL_REVERSIBLE_JUMP ? ggmpl::Algorithm::ReversibleJump : ggmpl::Algorithm::BirthDeath;
    const ggmpl::GraphPrior prior(config->beta);
    *out = new ggmpl_chain{ggmpl::run_chain(algorithm, stats->stats, prior, cfg)};
    if ((*out)->result.termination == ggmpl::Termination::Degenerate)
      return set_error(GGMPL_ERR_DEGENERATE_CHAIN, (*out)->result.diagnostic);
    return GGMPL_OK;
  });
}

void ggmpl_chain_destroy(ggmpl_chain* c) { delete c; }

int32_t ggmpl_chain_node_count(const ggmpl_chain* c) { return c ? c->result.p : 0; }

int64_t ggmpl_chain_iterations(const ggmpl_chain* c) { return c ? c->result.iterations : 0; }

int64_t ggmpl_chain_accepted(const ggmpl_chain* c) { return c ? c->result.accepted : 0; }

double ggmpl_chain_total_weight(const ggmpl_chain* c) { return c ? c->result.total_weight : 0.0; }

ggmpl_termination ggmpl_chain_termination(const ggmpl_chain* c) {
  if (!c) return GGMPL_COMPLETED;
  switch (c->result.termination) {
    case ggmpl::Termination::Completed: return GGMPL_COMPLETED;
    case ggmpl::Termination::StoppedEarly: return GGMPL_STOPPED_EARLY;
    case ggmpl::Termination::Degenerate: return GGMPL_DEGENERATE;
  }
  return GGMPL_COMPLETED;
}

const char* ggmpl_chain_diagnostic(const ggmpl_chain* c) { return c ? c->result.diagnostic.c_str() : ""; }

int64_t ggmpl_chain_trace_length(const ggmpl_chain* c) {
  return c ? static_cast<int64_t>(c->result.trace.size()) : 0;
}

ggmpl_status ggmpl_chain_trace_at(const ggmpl_chain* c, int64_t index, ggmpl_trace_record* out) {
  GGMPL_REQUIRE_PTR(c);
  GGMPL_REQUIRE_PTR(out);
  if (index < 0 || index >= static_cast<int64_t>(c->result.trace.size()))
    return set_error(GGMPL_ERR_INVALID_ARGUMENT, "trace index out of range");
  const auto& r = c->result.trace[static_cast<std::size_t>(index)];
  *out = {r.iteration, r.edge_count, r.total_logmpl, r.wall_seconds};
  return GGMPL_OK;
}

ggmpl_status ggmpl_chain_edge_inclusion(const ggmpl_chain* c, double* out, int64_t len) {
  GGMPL_REQUIRE_PTR(c);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, c->result.p);
    const auto probs = ggmpl::edge_inclusion(c->result);
    std::copy(probs.begin(), probs.end(), out);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_chain_write_trace(const ggmpl_chain* c, const char* path) {
  GGMPL_REQUIRE_PTR(c);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    ggmpl::io::write_trace_csv(path, c->result.trace);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_chain_write_samples(const ggmpl_chain* c, const char* path) {
  GGMPL_REQUIRE_PTR(c);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    const ggmpl::EdgeTable edges(c->result.p);
    std::string text;
    for (const auto& s : c->result.samples) {
      text += std::to_string(s.iteration) + ",";
      for (std::size_t t = 0; t < s.edges.size(); ++t) {
        const ggmpl::Edge e = edges[s.edges[t]];
        if (t) text += ' ';
        text += std::to_string(e.i + 1) + "-" + std::to_string(e.j + 1);
      }
      text += '\n';
    }
    ggmpl::io::write_file(path, text);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_edge_probs_write(int32_t p, const double* probs, int64_t len, const char* path) {
  GGMPL_REQUIRE_PTR(probs);
  GGMPL_REQUIRE_PTR(path);
  return guarded([&] {
    check_length(len, p);
    ggmpl::io::write_edge_probs(path, p, std::span<const double>(probs, static_cast<std::size_t>(len)));
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_edge_probs_read(const char* path, int32_t p, double* out, int64_t len) {
  GGMPL_REQUIRE_PTR(path);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, p);
    const auto probs = ggmpl::io::read_edge_probs(path, p);
    std::copy(probs.begin(), probs.end(), out);
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_select_graph(int32_t p, const double* probs, int64_t len, double threshold, ggmpl_graph** out) {
  GGMPL_REQUIRE_PTR(probs);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, p);
    *out = new ggmpl_graph{ggmpl::select_graph(p, std::span<const double>(probs, static_cast<std::size_t>(len)), threshold)};
    return GGMPL_OK;
  });
}

/* metrics */

ggmpl_status ggmpl_evaluate(const ggmpl_graph* truth, const double* probs, int64_t len, double threshold,
                            ggmpl_metrics* out) {
  GGMPL_REQUIRE_PTR(truth);
  GGMPL_REQUIRE_PTR(probs);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, truth->graph.node_count());
    const auto labels = ggmpl::edge_indicator(truth->graph);
    const ggmpl::ScoredEdges se{labels, std::span<const double>(probs, static_cast<std::size_t>(len))};
    const auto pm = ggmpl::pr_plus_minus(se);
    *out = {ggmpl::auc_roc(se), ggmpl::auc_pr(se), ggmpl::f1_at(se, threshold), pm.pr_plus, pm.pr_minus};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_auc_pr(const ggmpl_graph* truth, const double* probs, int64_t len, double* out) {
  GGMPL_REQUIRE_PTR(truth);
  GGMPL_REQUIRE_PTR(probs);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    check_length(len, truth->graph.node_count());
    const auto labels = ggmpl::edge_indicator(truth->graph);
    *out = ggmpl::auc_pr({labels, std::span<const double>(probs, static_cast<std::size_t>(len))});
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_convergence_time(const double* times, const double* values, int64_t len, double band,
                                    double* out) {
  GGMPL_REQUIRE_PTR(out);
  if (len > 0 && (!times || !values)) return set_error(GGMPL_ERR_INVALID_ARGUMENT, "trace arrays must not be NULL");
  return guarded([&] {
    std::vector<std::pair<double, double>> trace;
    for (int64_t t = 0; t < len; ++t) trace.emplace_back(times[t], values[t]);
    *out = ggmpl::convergence_time(trace, band);
    return GGMPL_OK;
  });
}

/* precision */

ggmpl_status ggmpl_estimate_precision(const ggmpl_stats* stats, const ggmpl_graph* g, double b, const ggmpl_matrix* D,
                                      int64_t draws, uint64_t seed, int32_t threads, ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(stats);
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    const auto prior = params_from(b, D, stats->stats.p());
    *out = new ggmpl_matrix{ggmpl::estimate_precision(stats->stats, g->graph, prior, draws, seed, threads)};
    return GGMPL_OK;
  });
}

ggmpl_status ggmpl_sample_gwishart(const ggmpl_graph* g, double b, const ggmpl_matrix* D, uint64_t seed,
                                   ggmpl_matrix** out) {
  GGMPL_REQUIRE_PTR(g);
  GGMPL_REQUIRE_PTR(out);
  return guarded([&] {
    const auto params = params_from(b, D, g->graph.node_count());
    ggmpl::Rng rng(seed);
    *out = new ggmpl_matrix{ggmpl::sample_gwishart(g->graph, params, rng).K};
    return GGMPL_OK;
  });
}

uint64_t ggmpl_derive_seed(uint64_t base, const char* descriptor, uint64_t index) {
  return ggmpl::derive_seed(ggmpl::derive_seed(base, descriptor ? std::string_view(descriptor) : std::string_view{}),
                            index);
}

}  // extern "C"
