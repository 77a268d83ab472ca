// ggmpl command-line tool: simulate, run, evaluate, estimate-precision, bench.
//
// Everything goes through the C interface in <ggmpl/ggmpl.h>. Data lands in
// files (or stdout for evaluate); diagnostics go to stderr. Exit codes:
// 0 success, 1 validation, 2 runtime/numeric, 3 I/O.

#include <ggmpl/ggmpl.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace {

// ---- error plumbing --------------------------------------------------------

struct CliFailure {
  int exit_code;
  std::string message;
};

[[noreturn]] void fail(int exit_code, const std::string& message) { throw CliFailure{exit_code, message}; }

[[noreturn]] void invalid(const std::string& message) { fail(1, message); }

void check(ggmpl_status status, const std::string& context) {
  if (status == GGMPL_OK) return;
  fail(static_cast<int>(ggmpl_status_classify(status)), context + ": " + ggmpl_last_error());
}

struct GraphDeleter {
  void operator()(ggmpl_graph* g) const { ggmpl_graph_destroy(g); }
};
struct MatrixDeleter {
  void operator()(ggmpl_matrix* m) const { ggmpl_matrix_destroy(m); }
};
struct StatsDeleter {
  void operator()(ggmpl_stats* s) const { ggmpl_stats_destroy(s); }
};
struct ChainDeleter {
  void operator()(ggmpl_chain* c) const { ggmpl_chain_destroy(c); }
};
using GraphPtr = std::unique_ptr<ggmpl_graph, GraphDeleter>;
using MatrixPtr = std::unique_ptr<ggmpl_matrix, MatrixDeleter>;
using StatsPtr = std::unique_ptr<ggmpl_stats, StatsDeleter>;
using ChainPtr = std::unique_ptr<ggmpl_chain, ChainDeleter>;

// ---- small text helpers ----------------------------------------------------

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double to_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) fail(3, "cannot parse " + what + " value '" + text + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(3, "cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) fail(3, "'" + path + "' is empty");
  t.header = split(strip_cr(line), ',');
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto row = split(line, ',');
    if (row.size() != t.header.size()) fail(3, "'" + path + "': row width differs from header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(3, "cannot write '" + path + "'");
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(3, "cannot create directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

// ---- option enums ----------------------------------------------------------

ggmpl_graph_kind parse_kind(const std::string& s) {
  if (s == "random") return GGMPL_GRAPH_RANDOM;
  if (s == "cluster") return GGMPL_GRAPH_CLUSTER;
  if (s == "scale-free") return GGMPL_GRAPH_SCALE_FREE;
  invalid("unknown graph kind '" + s + "' (random, cluster, scale-free)");
}

ggmpl_density parse_regime(const std::string& s) {
  if (s == "sparse") return GGMPL_SPARSE;
  if (s == "dense") return GGMPL_DENSE;
  invalid("unknown regime '" + s + "' (sparse, dense)");
}

ggmpl_algorithm parse_algorithm(const std::string& s) {
  if (s == "bd") return GGMPL_BIRTH_DEATH;
  if (s == "rj") return GGMPL_REVERSIBLE_JUMP;
  invalid("unknown algorithm '" + s + "' (bd, rj)");
}

ggmpl_proposal parse_proposal(const std::string& s) {
  if (s == "uniform") return GGMPL_PROPOSAL_UNIFORM;
  if (s == "two-step") return GGMPL_PROPOSAL_TWO_STEP;
  invalid("unknown proposal '" + s + "' (uniform, two-step)");
}

void require_threshold(double v) {
  if (!(v > 0.0 && v < 1.0)) invalid("--threshold must lie in (0, 1)");
}

// ---- shared pipeline pieces ------------------------------------------------

MatrixPtr load_data(const std::string& path, bool npn) {
  ggmpl_matrix* raw = nullptr;
  check(ggmpl_data_read_csv(path.c_str(), &raw), "reading " + path);
  MatrixPtr x(raw);
  if (!npn) return x;
  ggmpl_matrix* z = nullptr;
  check(ggmpl_nonparanormal(x.get(), &z), "nonparanormal transform");
  return MatrixPtr(z);
}

GraphPtr load_graph(const std::string& path) {
  ggmpl_graph* g = nullptr;
  check(ggmpl_graph_read(path.c_str(), &g), "reading " + path);
  return GraphPtr(g);
}

std::int64_t pair_count(std::int32_t p) { return static_cast<std::int64_t>(p) * (p - 1) / 2; }

struct ChainRequest {
  ggmpl_algorithm algorithm = GGMPL_BIRTH_DEATH;
  std::int64_t iterations = 100000;
  std::int64_t burn_in = -1;
  std::uint64_t seed = 1;
  double beta = 0.2;
  ggmpl_proposal proposal = GGMPL_PROPOSAL_UNIFORM;
  std::int64_t checkpoint_every = 0;
  std::int64_t thinning = 0;
  bool timing = false;
  std::int32_t threads = 1;
  double time_limit = 0.0;
  bool log = false;
};

struct AucPoint {
  std::int64_t iteration;
  double wall_seconds;
  double auc_pr;
};

struct CheckpointState {
  const ChainRequest* request = nullptr;
  const ggmpl_graph* truth = nullptr;
  std::vector<AucPoint> auc;
  std::string error;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

int on_checkpoint(void* user, const ggmpl_trace_record* rec, const double* probs, std::int64_t len) {
  auto* st = static_cast<CheckpointState*>(user);
  if (st->truth && probs) {
    double auc = 0.0;
    if (ggmpl_auc_pr(st->truth, probs, len, &auc) != GGMPL_OK) {
      st->error = ggmpl_last_error();
      return 0;
    }
    st->auc.push_back({rec->iteration, rec->wall_seconds, auc});
  }
  if (st->request->log) {
    std::cerr << "iteration " << rec->iteration << " edges " << rec->edge_count << " logmpl " << fmt(rec->total_logmpl);
    if (!st->auc.empty() && probs) std::cerr << " auc_pr " << fmt(st->auc.back().auc_pr);
    std::cerr << '\n';
  }
  if (st->request->time_limit > 0.0) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - st->start;
    if (elapsed.count() >= st->request->time_limit) return 0;
  }
  return 1;
}

struct ChainOutcome {
  ChainPtr chain;
  std::vector<double> probs;
  std::vector<AucPoint> auc;
  ggmpl_status status = GGMPL_OK;
};

ChainOutcome run_chain(const ggmpl_stats* stats, const ChainRequest& req, const ggmpl_graph* truth) {
  ggmpl_chain_config cfg;
  ggmpl_chain_config_init(&cfg);
  cfg.algorithm = req.algorithm;
  cfg.iterations = req.iterations;
  cfg.burn_in = req.burn_in;
  cfg.seed = req.seed;
  cfg.beta = req.beta;
  cfg.proposal = req.proposal;
  cfg.checkpoint_every = req.checkpoint_every;
  cfg.thinning = req.thinning;
  cfg.record_time = req.timing ? 1 : 0;
  cfg.threads = req.threads;
  CheckpointState st;
  st.request = &req;
  st.truth = truth;
  if (truth || req.log || req.time_limit > 0.0) {
    cfg.on_checkpoint = on_checkpoint;
    cfg.user_data = &st;
  }
  ggmpl_chain* raw = nullptr;
  ChainOutcome out;
  out.status = ggmpl_run_chain(stats, &cfg, &raw);
  out.chain.reset(raw);
  if (out.status != GGMPL_OK && out.status != GGMPL_ERR_DEGENERATE_CHAIN) check(out.status, "running chain");
  if (!st.error.empty()) fail(2, "checkpoint evaluation: " + st.error);
  const std::int32_t p = ggmpl_stats_variable_count(stats);
  out.probs.assign(static_cast<std::size_t>(pair_count(p)), 0.0);
  check(ggmpl_chain_edge_inclusion(out.chain.get(), out.probs.data(), static_cast<std::int64_t>(out.probs.size())),
        "edge inclusion");
  out.auc = std::move(st.auc);
  return out;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  int p = 0;
  std::string kind = "random";
  std::string regime = "sparse";
  std::int64_t n = 0;
  std::string n_level = "high";
  int clusters = 0;
  double b = 3.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.p < 2) invalid("--p must be at least 2");
  if (a.n_level != "low" && a.n_level != "high") invalid("--n-level must be low or high");
  ggmpl_instance_spec spec;
  ggmpl_instance_spec_init(&spec);
  spec.p = a.p;
  spec.kind = parse_kind(a.kind);
  spec.density = parse_regime(a.regime);
  spec.clusters = a.clusters;
  spec.n = a.n > 0 ? a.n
                   : ggmpl_default_sample_size(a.p, a.n_level == "low" ? GGMPL_SAMPLES_LOW : GGMPL_SAMPLES_HIGH);
  spec.b = a.b;
  spec.seed = a.seed;

  ggmpl_graph* g = nullptr;
  ggmpl_matrix* k = nullptr;
  ggmpl_matrix* x = nullptr;
  check(ggmpl_simulate(&spec, &g, &k, &x), "simulate");
  GraphPtr graph(g);
  MatrixPtr precision(k);
  MatrixPtr data(x);

  ensure_dir(a.out);
  check(ggmpl_graph_write(graph.get(), join_path(a.out, "graph.txt").c_str()), "writing graph");
  check(ggmpl_matrix_write_csv(precision.get(), join_path(a.out, "precision.csv").c_str()), "writing precision");
  check(ggmpl_data_write_csv(data.get(), join_path(a.out, "data.csv").c_str()), "writing data");
  auto m = open_out(join_path(a.out, "manifest.txt"));
  m << "p=" << a.p << "\nn=" << spec.n << "\nkind=" << a.kind << "\nregime=" << a.regime << '\n';
  if (spec.kind == GGMPL_GRAPH_CLUSTER) m << "clusters=" << (a.clusters > 0 ? a.clusters : (a.p < 1000 ? 2 : 8)) << '\n';
  m << "b=" << fmt(a.b) << "\nseed=" << a.seed << "\nn_e=" << ggmpl_graph_edge_count(graph.get()) << '\n';
  if (!m) fail(3, "writing manifest");
  return 0;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string data;
  std::string algorithm = "bd";
  std::string proposal = "uniform";
  double threshold = 0.5;
  bool npn = false;
  std::string truth;
  std::string out;
  ChainRequest chain;
};

int cmd_run(RunArgs a) {
  a.chain.algorithm = parse_algorithm(a.algorithm);
  a.chain.proposal = parse_proposal(a.proposal);
  require_threshold(a.threshold);
  if (a.chain.iterations < 1) invalid("--iterations must be positive");
  if (!(a.chain.beta > 0.0 && a.chain.beta < 1.0)) invalid("--beta must lie in (0, 1)");

  MatrixPtr x = load_data(a.data, a.npn);
  ggmpl_stats* s = nullptr;
  check(ggmpl_stats_from_data(x.get(), &s), "sufficient statistics");
  StatsPtr stats(s);
  const std::int32_t p = ggmpl_stats_variable_count(stats.get());
  GraphPtr truth;
  if (!a.truth.empty()) {
    truth = load_graph(a.truth);
    if (ggmpl_graph_node_count(truth.get()) != p) fail(1, "--truth graph dimension does not match the data");
  }

  ChainOutcome res = run_chain(stats.get(), a.chain, truth.get());

  ensure_dir(a.out);
  const auto len = static_cast<std::int64_t>(res.probs.size());
  check(ggmpl_edge_probs_write(p, res.probs.data(), len, join_path(a.out, "probs.csv").c_str()), "writing probs");
  check(ggmpl_chain_write_trace(res.chain.get(), join_path(a.out, "trace.csv").c_str()), "writing trace");
  ggmpl_graph* sel = nullptr;
  check(ggmpl_select_graph(p, res.probs.data(), len, a.threshold, &sel), "selecting graph");
  GraphPtr selected(sel);
  check(ggmpl_graph_write(selected.get(), join_path(a.out, "graph.txt").c_str()), "writing graph");
  if (a.chain.thinning > 0)
    check(ggmpl_chain_write_samples(res.chain.get(), join_path(a.out, "samples.txt").c_str()), "writing samples");
  if (truth) {
    auto t = open_out(join_path(a.out, "auc_trace.csv"));
    t << "iteration,wall_seconds,auc_pr\n";
    for (const auto& pt : res.auc) t << pt.iteration << ',' << fmt(pt.wall_seconds) << ',' << fmt(pt.auc_pr) << '\n';
    if (!t) fail(3, "writing auc trace");
  }
  auto sum = open_out(join_path(a.out, "summary.txt"));
  static const char* const term_names[] = {"completed", "stopped-early", "degenerate"};
  sum << "algorithm=" << a.algorithm << "\niterations=" << ggmpl_chain_iterations(res.chain.get()) << '\n';
  if (a.chain.algorithm == GGMPL_REVERSIBLE_JUMP) sum << "accepted=" << ggmpl_chain_accepted(res.chain.get()) << '\n';
  sum << "termination=" << term_names[ggmpl_chain_termination(res.chain.get())]
      << "\nselected_edges=" << ggmpl_graph_edge_count(selected.get()) << '\n';
  if (!sum) fail(3, "writing summary");

  if (res.status == GGMPL_ERR_DEGENERATE_CHAIN) {
    std::cerr << "ggmpl: chain stopped: " << ggmpl_chain_diagnostic(res.chain.get()) << '\n';
    return 2;
  }
  return 0;
}

// ---- evaluate --------------------------------------------------------------

std::optional<double> trace_convergence(const std::string& path, double band) {
  const CsvTable t = read_csv(path);
  const int time_col = t.column("wall_seconds");
  int value_col = t.column("auc_pr");
  if (value_col < 0) value_col = t.column("edge_count");
  if (time_col < 0 || value_col < 0) fail(3, "'" + path + "' needs wall_seconds and auc_pr or edge_count columns");
  if (t.rows.empty()) return std::nullopt;
  std::vector<double> times;
  std::vector<double> values;
  for (const auto& row : t.rows) {
    times.push_back(to_double(row[static_cast<std::size_t>(time_col)], "time"));
    values.push_back(to_double(row[static_cast<std::size_t>(value_col)], "trace"));
  }
  double out = 0.0;
  check(ggmpl_convergence_time(times.data(), values.data(), static_cast<std::int64_t>(times.size()), band, &out),
        "convergence time");
  return out;
}

const char* kMetricsHeader = "auc_roc,auc_pr,f1,pr_plus,pr_minus,conv_seconds,iterations,seed";

struct EvaluateArgs {
  std::string probs;
  std::string truth;
  double threshold = 0.5;
  std::string trace;
  double band = 0.01;
  std::int64_t iterations = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  require_threshold(a.threshold);
  GraphPtr truth = load_graph(a.truth);
  const std::int32_t p = ggmpl_graph_node_count(truth.get());
  std::vector<double> probs(static_cast<std::size_t>(pair_count(p)));
  check(ggmpl_edge_probs_read(a.probs.c_str(), p, probs.data(), static_cast<std::int64_t>(probs.size())),
        "reading " + a.probs);
  ggmpl_metrics m{};
  check(ggmpl_evaluate(truth.get(), probs.data(), static_cast<std::int64_t>(probs.size()), a.threshold, &m),
        "evaluate");
  std::optional<double> conv;
  if (!a.trace.empty()) conv = trace_convergence(a.trace, a.band);

  std::ostringstream row;
  row << kMetricsHeader << '\n'
      << fmt(m.auc_roc) << ',' << fmt(m.auc_pr) << ',' << fmt(m.f1) << ',' << fmt(m.pr_plus) << ','
      << fmt(m.pr_minus) << ',' << (conv ? fmt(*conv) : std::string("nan")) << ',' << a.iterations << ',' << a.seed
      << '\n';
  if (a.out.empty()) {
    std::cout << row.str();
  } else {
    auto f = open_out(a.out);
    f << row.str();
    if (!f) fail(3, "writing " + a.out);
  }
  return 0;
}

// ---- estimate-precision ----------------------------------------------------

struct PrecisionArgs {
  std::string data;
  std::string graph;
  double b = 3.0;
  std::string d = "identity";
  std::int64_t draws = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool npn = false;
  std::string out;
};

int cmd_estimate_precision(const PrecisionArgs& a) {
  if (!(a.b > 2.0)) invalid("--b must exceed 2");
  if (a.draws < 1) invalid("--draws must be positive");
  MatrixPtr x = load_data(a.data, a.npn);
  ggmpl_stats* s = nullptr;
  check(ggmpl_stats_from_data(x.get(), &s), "sufficient statistics");
  StatsPtr stats(s);
  GraphPtr g = load_graph(a.graph);
  if (ggmpl_graph_node_count(g.get()) != ggmpl_stats_variable_count(stats.get()))
    fail(1, "graph dimension does not match the data");
  MatrixPtr d;
  if (a.d != "identity") {
    ggmpl_matrix* raw = nullptr;
    check(ggmpl_matrix_read_csv(a.d.c_str(), &raw), "reading " + a.d);
    d.reset(raw);
  }
  ggmpl_matrix* k = nullptr;
  check(ggmpl_estimate_precision(stats.get(), g.get(), a.b, d.get(), a.draws, a.seed, a.threads, &k),
        "estimating precision");
  MatrixPtr precision(k);
  check(ggmpl_matrix_write_csv(precision.get(), a.out.c_str()), "writing " + a.out);
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::vector<int> ps{10};
  std::vector<std::string> kinds{"random"};
  std::vector<std::string> regimes{"sparse"};
  std::vector<std::string> ns{"high"};
  int reps = 16;
  std::vector<std::string> algorithms{"bd", "rj"};
  std::int64_t bd_iterations = 30000;
  std::int64_t rj_iterations = 100000;
  double beta = 0.2;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  int workers = 0;
  bool timing = false;
  std::string results;
  std::string aggregate;
};

struct Cell {
  int p;
  std::string kind;
  std::string regime;
  std::int64_t n;
  std::string descriptor() const {
    return "p=" + std::to_string(p) + "/kind=" + kind + "/regime=" + regime + "/n=" + std::to_string(n);
  }
};

const std::vector<std::string> kResultColumns = {"cell",   "p",       "kind",     "regime",       "n",
                                                 "algorithm", "rep",  "auc_roc",  "auc_pr",       "f1",
                                                 "pr_plus", "pr_minus", "conv_seconds", "conv_iteration",
                                                 "iterations", "seed"};
const std::vector<std::string> kMetricNames = {"auc_roc", "auc_pr", "f1", "pr_plus", "pr_minus",
                                               "conv_seconds", "conv_iteration", "iterations"};

struct ResultRow {
  std::size_t cell = 0;
  std::size_t algorithm = 0;
  int rep = 0;
  std::vector<std::string> fields;  // in kResultColumns order
};

std::string csv_line(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) s += ',';
    s += fields[k];
  }
  return s;
}

// Runs every requested algorithm on one (cell, rep) instance.
std::vector<ResultRow> bench_task(const BenchArgs& a, const Cell& cell, std::size_t cell_index, int rep,
                                  const std::vector<std::size_t>& algorithms) {
  const std::string desc = cell.descriptor();
  const std::uint64_t instance_seed = ggmpl_derive_seed(a.seed, desc.c_str(), static_cast<std::uint64_t>(rep));
  ggmpl_instance_spec spec;
  ggmpl_instance_spec_init(&spec);
  spec.p = cell.p;
  spec.kind = parse_kind(cell.kind);
  spec.density = parse_regime(cell.regime);
  spec.n = cell.n;
  spec.seed = instance_seed;
  ggmpl_graph* g = nullptr;
  ggmpl_matrix* x = nullptr;
  check(ggmpl_simulate(&spec, &g, nullptr, &x), "simulate");
  GraphPtr truth(g);
  MatrixPtr data(x);
  ggmpl_stats* s = nullptr;
  check(ggmpl_stats_from_data(data.get(), &s), "sufficient statistics");
  StatsPtr stats(s);

  std::vector<ResultRow> rows;
  for (std::size_t alg : algorithms) {
    const std::string& name = a.algorithms[alg];
    ChainRequest req;
    req.algorithm = parse_algorithm(name);
    req.iterations = req.algorithm == GGMPL_BIRTH_DEATH ? a.bd_iterations : a.rj_iterations;
    req.seed = ggmpl_derive_seed(instance_seed, name.c_str(), 0);
    req.beta = a.beta;
    req.timing = a.timing;
    ChainOutcome res = run_chain(stats.get(), req, truth.get());
    if (res.status != GGMPL_OK) check(res.status, "running chain");
    ggmpl_metrics m{};
    check(ggmpl_evaluate(truth.get(), res.probs.data(), static_cast<std::int64_t>(res.probs.size()), a.threshold, &m),
          "evaluate");
    std::string conv_seconds = "nan";
    std::string conv_iteration = "nan";
    if (!res.auc.empty()) {
      std::vector<double> t;
      std::vector<double> it;
      std::vector<double> v;
      for (const auto& pt : res.auc) {
        t.push_back(pt.wall_seconds);
        it.push_back(static_cast<double>(pt.iteration));
        v.push_back(pt.auc_pr);
      }
      double out = 0.0;
      const auto len = static_cast<std::int64_t>(v.size());
      check(ggmpl_convergence_time(it.data(), v.data(), len, 0.01, &out), "convergence");
      conv_iteration = fmt(out);
      if (a.timing) {
        check(ggmpl_convergence_time(t.data(), v.data(), len, 0.01, &out), "convergence");
        conv_seconds = fmt(out);
      }
    }
    ResultRow row;
    row.cell = cell_index;
    row.algorithm = alg;
    row.rep = rep;
    row.fields = {desc,
                  std::to_string(cell.p),
                  cell.kind,
                  cell.regime,
                  std::to_string(cell.n),
                  name,
                  std::to_string(rep),
                  fmt(m.auc_roc),
                  fmt(m.auc_pr),
                  fmt(m.f1),
                  fmt(m.pr_plus),
                  fmt(m.pr_minus),
                  conv_seconds,
                  conv_iteration,
                  std::to_string(ggmpl_chain_iterations(res.chain.get())),
                  std::to_string(instance_seed)};
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_bench(BenchArgs a) {
  if (a.reps < 1) invalid("--reps must be positive");
  if (a.bd_iterations < 1 || a.rj_iterations < 1) invalid("iteration counts must be positive");
  if (a.results.empty() || a.aggregate.empty()) invalid("--results and --aggregate are required");
  require_threshold(a.threshold);
  for (const auto& alg : a.algorithms) parse_algorithm(alg);
  for (const auto& k : a.kinds) parse_kind(k);
  for (const auto& r : a.regimes) parse_regime(r);
  if (a.workers <= 0) {
    const char* env = std::getenv("GGMPL_WORKERS");
    a.workers = env ? std::max(1, std::atoi(env)) : 1;
  }

  std::vector<Cell> cells;
  for (int p : a.ps) {
    if (p < 2) invalid("grid p values must be at least 2");
    for (const auto& kind : a.kinds)
      for (const auto& regime : a.regimes)
        for (const auto& n_text : a.ns) {
          std::int64_t n = 0;
          if (n_text == "low") n = ggmpl_default_sample_size(p, GGMPL_SAMPLES_LOW);
          else if (n_text == "high") n = ggmpl_default_sample_size(p, GGMPL_SAMPLES_HIGH);
          else {
            const auto res = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
            if (res.ec != std::errc() || res.ptr != n_text.data() + n_text.size() || n < 1)
              invalid("bad --n entry '" + n_text + "' (positive integer, low, high)");
          }
          cells.push_back({p, kind, regime, n});
        }
  }
  std::map<std::string, std::size_t> cell_index;
  for (std::size_t c = 0; c < cells.size(); ++c) cell_index.emplace(cells[c].descriptor(), c);
  std::map<std::string, std::size_t> alg_index;
  for (std::size_t k = 0; k < a.algorithms.size(); ++k) alg_index.emplace(a.algorithms[k], k);

  // Resume: keep rows already recorded for this grid.
  std::vector<ResultRow> rows;
  std::set<std::tuple<std::size_t, std::size_t, int>> done;
  if (fs::exists(a.results)) {
    const CsvTable t = read_csv(a.results);
    if (t.header != kResultColumns) fail(3, "'" + a.results + "' has an unexpected header; refusing to resume");
    for (const auto& f : t.rows) {
      const auto c = cell_index.find(f[0]);
      const auto al = alg_index.find(f[5]);
      if (c == cell_index.end() || al == alg_index.end()) continue;
      const int rep = std::atoi(f[6].c_str());
      if (rep < 0 || rep >= a.reps) continue;
      if (!done.emplace(c->second, al->second, rep).second) continue;
      rows.push_back({c->second, al->second, rep, f});
    }
  }

  struct Task {
    std::size_t cell;
    int rep;
    std::vector<std::size_t> algorithms;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < a.reps; ++r) {
      Task task{c, r, {}};
      for (std::size_t al = 0; al < a.algorithms.size(); ++al)
        if (!done.count({c, al, r})) task.algorithms.push_back(al);
      if (!task.algorithms.empty()) tasks.push_back(std::move(task));
    }

  {
    const bool fresh = !fs::exists(a.results);
    auto out = open_out(a.results, std::ios::app);
    if (fresh) out << csv_line(kResultColumns) << '\n';
  }
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  int worst_exit = 0;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      const Cell& cell = cells[task.cell];
      try {
        auto produced = bench_task(a, cell, task.cell, task.rep, task.algorithms);
        std::lock_guard lock(mu);
        auto out = open_out(a.results, std::ios::app);
        for (auto& row : produced) {
          out << csv_line(row.fields) << '\n';
          rows.push_back(std::move(row));
        }
        out.flush();
        if (!out) fail(3, "appending to " + a.results);
      } catch (const CliFailure& f) {
        std::lock_guard lock(mu);
        std::cerr << "ggmpl: bench " << cell.descriptor() << " rep " << task.rep << " failed: " << f.message << '\n';
        worst_exit = std::max(worst_exit, f.exit_code);
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min<int>(a.workers, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Deterministic merge: rewrite both files in grid order.
  std::sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
    return std::tie(x.cell, x.algorithm, x.rep) < std::tie(y.cell, y.algorithm, y.rep);
  });
  {
    auto out = open_out(a.results);
    out << csv_line(kResultColumns) << '\n';
    for (const auto& row : rows) out << csv_line(row.fields) << '\n';
    if (!out) fail(3, "writing " + a.results);
  }
  auto agg = open_out(a.aggregate);
  agg << "cell,p,kind,regime,n,algorithm,reps";
  for (const auto& name : kMetricNames) agg << ",mean_" << name;
  agg << '\n';
  for (std::size_t b = 0; b < rows.size();) {
    std::size_t e = b;
    while (e < rows.size() && rows[e].cell == rows[b].cell && rows[e].algorithm == rows[b].algorithm) ++e;
    const auto& f = rows[b].fields;
    agg << f[0] << ',' << f[1] << ',' << f[2] << ',' << f[3] << ',' << f[4] << ',' << f[5] << ',' << (e - b);
    for (const auto& name : kMetricNames) {
      const auto col = static_cast<std::size_t>(
          std::find(kResultColumns.begin(), kResultColumns.end(), name) - kResultColumns.begin());
      double total = 0.0;
      for (std::size_t r = b; r < e; ++r) total += to_double(rows[r].fields[col], name);
      agg << ',' << fmt(total / static_cast<double>(e - b));
    }
    agg << '\n';
    b = e;
  }
  if (!agg) fail(3, "writing " + a.aggregate);
  return worst_exit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian graphical model structure learning with marginal pseudo-likelihood"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ggmpl_version());

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate a graph, precision matrix and Gaussian data");
  c_sim->add_option("--p", sim.p, "Number of variables")->required();
  c_sim->add_option("--kind", sim.kind, "random, cluster or scale-free");
  c_sim->add_option("--regime", sim.regime, "sparse or dense");
  c_sim->add_option("--n", sim.n, "Sample size (default: from --n-level)");
  c_sim->add_option("--n-level", sim.n_level, "low or high default sample size");
  c_sim->add_option("--clusters", sim.clusters, "Cluster count for the cluster kind");
  c_sim->add_option("--b", sim.b, "G-Wishart shape of the generating prior");
  c_sim->add_option("--seed", sim.seed, "Random seed");
  c_sim->add_option("--out", sim.out, "Output directory")->required();

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Sample graphs and estimate edge-inclusion probabilities");
  c_run->add_option("--data", run.data, "Data CSV")->required();
  c_run->add_option("--algorithm", run.algorithm, "bd (birth-death) or rj (reversible jump)");
  c_run->add_option("--iterations", run.chain.iterations, "Chain length");
  c_run->add_option("--burn-in", run.chain.burn_in, "Burn-in iterations (default: half)");
  c_run->add_option("--beta", run.chain.beta, "Prior edge-inclusion probability");
  c_run->add_option("--seed", run.chain.seed, "Random seed");
  c_run->add_option("--threshold", run.threshold, "Selection threshold for graph.txt");
  c_run->add_option("--proposal", run.proposal, "uniform or two-step (rj only)");
  c_run->add_option("--checkpoint-every", run.chain.checkpoint_every, "Trace interval (default: 1% of iterations)");
  c_run->add_option("--thinning", run.chain.thinning, "Keep every k-th post-burn-in graph in samples.txt");
  c_run->add_option("--threads", run.chain.threads, "Threads for the initial rate table");
  c_run->add_option("--time-limit", run.chain.time_limit, "Stop at the first checkpoint past this many seconds");
  c_run->add_flag("--npn", run.npn, "Apply the nonparanormal transform first");
  c_run->add_flag("--timing", run.chain.timing, "Record wall-clock seconds in traces");
  c_run->add_flag("--log", run.chain.log, "Print one line per checkpoint to stderr");
  c_run->add_option("--truth", run.truth, "True graph; writes auc_trace.csv");
  c_run->add_option("--out", run.out, "Output directory")->required();

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score edge probabilities against a true graph");
  c_ev->add_option("--probs", ev.probs, "Edge-probability CSV")->required();
  c_ev->add_option("--truth", ev.truth, "True graph edge list")->required();
  c_ev->add_option("--threshold", ev.threshold, "Threshold for F1");
  c_ev->add_option("--trace", ev.trace, "Trace CSV with wall_seconds and auc_pr or edge_count");
  c_ev->add_option("--band", ev.band, "Convergence band");
  c_ev->add_option("--iterations", ev.iterations, "Iterations column value");
  c_ev->add_option("--seed", ev.seed, "Seed column value");
  c_ev->add_option("--out", ev.out, "Output CSV (default: stdout)");

  PrecisionArgs pr;
  auto* c_pr = app.add_subcommand("estimate-precision", "Posterior-mean precision matrix for a fixed graph");
  c_pr->add_option("--data", pr.data, "Data CSV")->required();
  c_pr->add_option("--graph", pr.graph, "Graph edge list")->required();
  c_pr->add_option("--b", pr.b, "G-Wishart prior shape");
  c_pr->add_option("--D", pr.d, "identity or a CSV path for the prior scale");
  c_pr->add_option("--draws", pr.draws, "Posterior draws");
  c_pr->add_option("--seed", pr.seed, "Random seed");
  c_pr->add_option("--threads", pr.threads, "Worker threads");
  c_pr->add_flag("--npn", pr.npn, "Apply the nonparanormal transform first");
  c_pr->add_option("--out", pr.out, "Output CSV")->required();

  BenchArgs be;
  auto* c_be = app.add_subcommand("bench", "Simulate, run and evaluate over a grid");
  c_be->add_option("--p", be.ps, "Variable counts")->delimiter(',');
  c_be->add_option("--kind", be.kinds, "Graph kinds")->delimiter(',');
  c_be->add_option("--regime", be.regimes, "Regimes")->delimiter(',');
  c_be->add_option("--n", be.ns, "Sample sizes (integers, low, high)")->delimiter(',');
  c_be->add_option("--reps", be.reps, "Replications per cell");
  c_be->add_option("--algorithms", be.algorithms, "Algorithms")->delimiter(',');
  c_be->add_option("--bd-iterations", be.bd_iterations, "Birth-death chain length");
  c_be->add_option("--rj-iterations", be.rj_iterations, "Reversible-jump chain length");
  c_be->add_option("--beta", be.beta, "Prior edge-inclusion probability");
  c_be->add_option("--threshold", be.threshold, "Threshold for F1");
  c_be->add_option("--seed", be.seed, "Base seed");
  c_be->add_option("--workers", be.workers, "Concurrent cells (default: GGMPL_WORKERS or 1)");
  c_be->add_flag("--timing", be.timing, "Record wall-clock convergence times");
  c_be->add_option("--results", be.results, "Per-replication CSV (resumed if present)")->required();
  c_be->add_option("--aggregate", be.aggregate, "Per-cell mean CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ggmpl: " << e.what() << '\n';
    return 1;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim);
    if (c_run->parsed()) return cmd_run(run);
    if (c_ev->parsed()) return cmd_evaluate(ev);
    if (c_pr->parsed()) return cmd_estimate_precision(pr);
    if (c_be->parsed()) return cmd_bench(be);
  } catch (const CliFailure& f) {
    std::cerr << "ggmpl: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "ggmpl: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
