/*
 * ggmpl: Gaussian graphical model structure learning with marginal
 * pseudo-likelihood.
 *
 * C interface. All objects are opaque handles created by the library and
 * released with the matching *_destroy function; destroy functions accept
 * NULL. Every fallible call returns a ggmpl_status and, on failure, leaves a
 * human-readable message retrievable with ggmpl_last_error() on the calling
 * thread.
 *
 * Nodes are 0-based in this interface. Edge vectors have p(p-1)/2 entries in
 * canonical order: (0,1), (0,2), ..., (0,p-1), (1,2), ..., (p-2,p-1).
 */
#ifndef GGMPL_GGMPL_H
#define GGMPL_GGMPL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GGMPL_BUILDING_LIBRARY)
#    define GGMPL_API __declspec(dllexport)
#  else
#    define GGMPL_API __declspec(dllimport)
#  endif
#else
#  define GGMPL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggmpl_status {
  GGMPL_OK = 0,
  GGMPL_ERR_INVALID_ARGUMENT = 1,
  GGMPL_ERR_DIMENSION_MISMATCH = 2,
  GGMPL_ERR_NOT_POSITIVE_DEFINITE = 3,
  GGMPL_ERR_SAMPLE_SIZE_TOO_SMALL = 4,
  GGMPL_ERR_DEGENERATE_CHAIN = 5,
  GGMPL_ERR_NON_CONVERGENCE = 6,
  GGMPL_ERR_DEGENERATE_LABELS = 7,
  GGMPL_ERR_EMPTY_CHAIN = 8,
  GGMPL_ERR_CONSTANT_COLUMN = 9,
  GGMPL_ERR_INFEASIBLE_EDGE_COUNT = 10,
  GGMPL_ERR_IO = 11,
  GGMPL_ERR_PARSE = 12,
  GGMPL_ERR_INTERNAL = 13
} ggmpl_status;

/* Broad failure classes, suitable as process exit codes. */
typedef enum ggmpl_status_class {
  GGMPL_CLASS_OK = 0,
  GGMPL_CLASS_VALIDATION = 1,
  GGMPL_CLASS_RUNTIME = 2,
  GGMPL_CLASS_IO = 3
} ggmpl_status_class;

typedef struct ggmpl_graph ggmpl_graph;
typedef struct ggmpl_matrix ggmpl_matrix;
typedef struct ggmpl_stats ggmpl_stats;
typedef struct ggmpl_chain ggmpl_chain;

GGMPL_API const char* ggmpl_version(void);
GGMPL_API const char* ggmpl_last_error(void);
GGMPL_API const char* ggmpl_status_name(ggmpl_status status);
GGMPL_API ggmpl_status_class ggmpl_status_classify(ggmpl_status status);

/* ---- graphs ------------------------------------------------------------ */

GGMPL_API ggmpl_status ggmpl_graph_create(int32_t p, ggmpl_graph** out);
GGMPL_API ggmpl_status ggmpl_graph_clone(const ggmpl_graph* g, ggmpl_graph** out);
GGMPL_API void ggmpl_graph_destroy(ggmpl_graph* g);
GGMPL_API int32_t ggmpl_graph_node_count(const ggmpl_graph* g);
GGMPL_API int64_t ggmpl_graph_edge_count(const ggmpl_graph* g);
GGMPL_API ggmpl_status ggmpl_graph_has_edge(const ggmpl_graph* g, int32_t i, int32_t j, int* out);
GGMPL_API ggmpl_status ggmpl_graph_flip(ggmpl_graph* g, int32_t i, int32_t j);
/* Writes the canonical 0/1 indicator of the edge set into out[len]. */
GGMPL_API ggmpl_status ggmpl_graph_indicator(const ggmpl_graph* g, uint8_t* out, int64_t len);
/* Edge-list text file: "p=<int>" then "i j" per line, 1-based, i < j. */
GGMPL_API ggmpl_status ggmpl_graph_read(const char* path, ggmpl_graph** out);
GGMPL_API ggmpl_status ggmpl_graph_write(const ggmpl_graph* g, const char* path);

/* ---- dense matrices (row-major copies) --------------------------------- */

/* data may be NULL for a zero matrix. */
GGMPL_API ggmpl_status ggmpl_matrix_create(int64_t rows, int64_t cols, const double* data, ggmpl_matrix** out);
GGMPL_API void ggmpl_matrix_destroy(ggmpl_matrix* m);
GGMPL_API int64_t ggmpl_matrix_rows(const ggmpl_matrix* m);
GGMPL_API int64_t ggmpl_matrix_cols(const ggmpl_matrix* m);
GGMPL_API double ggmpl_matrix_get(const ggmpl_matrix* m, int64_t r, int64_t c);
/* Copies the matrix in row-major order into out[rows*cols]. */
GGMPL_API ggmpl_status ggmpl_matrix_copy_to(const ggmpl_matrix* m, double* out, int64_t len);
/* Data CSV: header row of variable names then numeric rows. */
GGMPL_API ggmpl_status ggmpl_data_read_csv(const char* path, ggmpl_matrix** out);
GGMPL_API ggmpl_status ggmpl_data_write_csv(const ggmpl_matrix* x, const char* path);
/* Headerless dense CSV (precision matrices). */
GGMPL_API ggmpl_status ggmpl_matrix_read_csv(const char* path, ggmpl_matrix** out);
GGMPL_API ggmpl_status ggmpl_matrix_write_csv(const ggmpl_matrix* m, const char* path);
/* 1 when the matrix admits a Cholesky factorization. */
GGMPL_API int ggmpl_matrix_is_positive_definite(const ggmpl_matrix* m);

/* Rank-based Gaussianization of each column, then centering. */
GGMPL_API ggmpl_status ggmpl_nonparanormal(const ggmpl_matrix* x, ggmpl_matrix** out);

/* ---- sufficient statistics -------------------------------------------- */

/* n = rows, p = cols, U = XᵀX. */
GGMPL_API ggmpl_status ggmpl_stats_from_data(const ggmpl_matrix* x, ggmpl_stats** out);
GGMPL_API void ggmpl_stats_destroy(ggmpl_stats* s);
GGMPL_API int64_t ggmpl_stats_sample_size(const ggmpl_stats* s);
GGMPL_API int32_t ggmpl_stats_variable_count(const ggmpl_stats* s);
/* log P(X_h | X_nb) for the given neighbor list. */
GGMPL_API ggmpl_status ggmpl_log_node_mpl(const ggmpl_stats* s, int32_t h, const int32_t* nb, int64_t nb_len,
                                          double* out);

/* ---- simulation -------------------------------------------------------- */

typedef enum ggmpl_graph_kind { GGMPL_GRAPH_RANDOM = 0, GGMPL_GRAPH_CLUSTER = 1, GGMPL_GRAPH_SCALE_FREE = 2 } ggmpl_graph_kind;
typedef enum ggmpl_density { GGMPL_SPARSE = 0, GGMPL_DENSE = 1 } ggmpl_density;
typedef enum ggmpl_sample_level { GGMPL_SAMPLES_LOW = 0, GGMPL_SAMPLES_HIGH = 1 } ggmpl_sample_level;

typedef struct ggmpl_instance_spec {
  int32_t p;
  ggmpl_graph_kind kind;
  ggmpl_density density;
  int32_t clusters; /* 0: two below p = 1000, eight from there */
  int64_t n;        /* 0: high-sample default for p */
  double b;         /* G-Wishart shape of the generating W_G(b, I) */
  uint64_t seed;
} ggmpl_instance_spec;

GGMPL_API void ggmpl_instance_spec_init(ggmpl_instance_spec* spec);
GGMPL_API int64_t ggmpl_target_edge_count(int32_t p, ggmpl_density density);
GGMPL_API int64_t ggmpl_default_sample_size(int32_t p, ggmpl_sample_level level);
/* Any of the outputs may be NULL when not wanted. */
GGMPL_API ggmpl_status ggmpl_simulate(const ggmpl_instance_spec* spec, ggmpl_graph** graph, ggmpl_matrix** precision,
                                      ggmpl_matrix** data);

/* ---- chains ------------------------------------------------------------ */

typedef enum ggmpl_algorithm { GGMPL_BIRTH_DEATH = 0, GGMPL_REVERSIBLE_JUMP = 1 } ggmpl_algorithm;
typedef enum ggmpl_proposal { GGMPL_PROPOSAL_UNIFORM = 0, GGMPL_PROPOSAL_TWO_STEP = 1 } ggmpl_proposal;
typedef enum ggmpl_termination { GGMPL_COMPLETED = 0, GGMPL_STOPPED_EARLY = 1, GGMPL_DEGENERATE = 2 } ggmpl_termination;

typedef struct ggmpl_trace_record {
  int64_t iteration;
  int64_t edge_count;
  double total_logmpl;
  double wall_seconds;
} ggmpl_trace_record;

/* Called at each checkpoint. edge_probs is the running edge-inclusion
 * estimate (len entries) or NULL while still in burn-in. Return 0 to stop. */
typedef int (*ggmpl_checkpoint_fn)(void* user_data, const ggmpl_trace_record* record, const double* edge_probs,
                                   int64_t len);

typedef struct ggmpl_chain_config {
  ggmpl_algorithm algorithm;
  int64_t iterations;
  int64_t burn_in;          /* < 0: iterations / 2 */
  uint64_t seed;
  double beta;              /* prior edge-inclusion probability */
  ggmpl_proposal proposal;  /* reversible jump only */
  int64_t checkpoint_every; /* 0: iterations / 100 */
  int64_t thinning;         /* 0: keep no graph samples */
  int record_time;          /* 0: wall_seconds recorded as 0 */
  int32_t threads;          /* workers for the initial rate table */
  const ggmpl_graph* init_graph; /* NULL: empty graph */
  ggmpl_checkpoint_fn on_checkpoint;
  void* user_data;
} ggmpl_chain_config;

GGMPL_API void ggmpl_chain_config_init(ggmpl_chain_config* config);

/* Runs a chain. When the chain stops on all-zero rates the call returns
 * GGMPL_ERR_DEGENERATE_CHAIN and still hands back the partial result. */
GGMPL_API ggmpl_status ggmpl_run_chain(const ggmpl_stats* stats, const ggmpl_chain_config* config, ggmpl_chain** out);
GGMPL_API void ggmpl_chain_destroy(ggmpl_chain* c);
GGMPL_API int32_t ggmpl_chain_node_count(const ggmpl_chain* c);
GGMPL_API int64_t ggmpl_chain_iterations(const ggmpl_chain* c);
GGMPL_API int64_t ggmpl_chain_accepted(const ggmpl_chain* c);
GGMPL_API double ggmpl_chain_total_weight(const ggmpl_chain* c);
GGMPL_API ggmpl_termination ggmpl_chain_termination(const ggmpl_chain* c);
GGMPL_API const char* ggmpl_chain_diagnostic(const ggmpl_chain* c);
GGMPL_API int64_t ggmpl_chain_trace_length(const ggmpl_chain* c);
GGMPL_API ggmpl_status ggmpl_chain_trace_at(const ggmpl_chain* c, int64_t index, ggmpl_trace_record* out);
/* P̂_e for every canonical edge; len must be p(p-1)/2. */
GGMPL_API ggmpl_status ggmpl_chain_edge_inclusion(const ggmpl_chain* c, double* out, int64_t len);
GGMPL_API ggmpl_status ggmpl_chain_write_trace(const ggmpl_chain* c, const char* path);
/* One line per retained graph: "<iteration>,<i>-<j> <i>-<j> ..." (1-based). */
GGMPL_API ggmpl_status ggmpl_chain_write_samples(const ggmpl_chain* c, const char* path);

/* Edge-probability CSV "i,j,prob" (1-based, i < j, prob > 0 only). */
GGMPL_API ggmpl_status ggmpl_edge_probs_write(int32_t p, const double* probs, int64_t len, const char* path);
GGMPL_API ggmpl_status ggmpl_edge_probs_read(const char* path, int32_t p, double* out, int64_t len);

/* Graph of edges with probs[e] >= threshold. */
GGMPL_API ggmpl_status ggmpl_select_graph(int32_t p, const double* probs, int64_t len, double threshold,
                                          ggmpl_graph** out);

/* ---- metrics ----------------------------------------------------------- */

typedef struct ggmpl_metrics {
  double auc_roc;
  double auc_pr;
  double f1;
  double pr_plus;
  double pr_minus;
} ggmpl_metrics;

GGMPL_API ggmpl_status ggmpl_evaluate(const ggmpl_graph* truth, const double* probs, int64_t len, double threshold,
                                      ggmpl_metrics* out);
GGMPL_API ggmpl_status ggmpl_auc_pr(const ggmpl_graph* truth, const double* probs, int64_t len, double* out);
/* Earliest time from which every value stays within band of the last one. */
GGMPL_API ggmpl_status ggmpl_convergence_time(const double* times, const double* values, int64_t len, double band,
                                              double* out);

/* ---- precision matrices ------------------------------------------------ */

/* Mean of draws samples from W_G(b + n, D + U). D == NULL means identity. */
GGMPL_API ggmpl_status ggmpl_estimate_precision(const ggmpl_stats* stats, const ggmpl_graph* g, double b,
                                                const ggmpl_matrix* D, int64_t draws, uint64_t seed,
                                                int32_t threads, ggmpl_matrix** out);
/* One draw from W_G(b, D). D == NULL means identity. */
GGMPL_API ggmpl_status ggmpl_sample_gwishart(const ggmpl_graph* g, double b, const ggmpl_matrix* D, uint64_t seed,
                                             ggmpl_matrix** out);

/* ---- seeds ------------------------------------------------------------- */

/* Deterministic substream seed for a named replication. */
GGMPL_API uint64_t ggmpl_derive_seed(uint64_t base, const char* descriptor, uint64_t index);

#ifdef __cplusplus
}
#endif

#endif /* GGMPL_GGMPL_H */
