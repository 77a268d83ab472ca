#include "mpl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "error.hpp"

namespace ggmpl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scratch space for the submatrix factorization; one per thread so that
// concurrent rate evaluations never share it.
thread_local std::vector<double> tl_factor;
thread_local std::vector<int> tl_index;

// In-place Cholesky of the row-major k×k matrix `a` (lower triangle used).
// Returns the last diagonal entry of the factor squared, i.e. the Schur
// complement of the trailing variable, or a non-positive value on failure.
double trailing_schur_complement(double* a, int k) noexcept {
  for (int c = 0; c < k; ++c) {
    double* row_c = a + static_cast<std::ptrdiff_t>(c) * k;
    double d = row_c[c];
    for (int t = 0; t < c; ++t) d -= row_c[t] * row_c[t];
    if (!(d > 0.0)) return d;
    if (c == k - 1) return d;
    const double l = std::sqrt(d);
    row_c[c] = l;
    const double inv = 1.0 / l;
    for (int r = c + 1; r < k; ++r) {
      double* row_r = a + static_cast<std::ptrdiff_t>(r) * k;
      double s = row_r[c];
      for (int t = 0; t < c; ++t) s -= row_r[t] * row_c[t];
      row_r[c] = s * inv;
    }
  }
  return 0.0;
}

}  // namespace

SufficientStats::SufficientStats(std::int64_t n, Eigen::MatrixXd gram) : n_(n), gram_(std::move(gram)) {
  require(n >= 1, "observation count must be >= 1");
  if (gram_.rows() != gram_.cols() || gram_.rows() < 1)
    fail(ErrorCode::DimensionMismatch, "Gram matrix must be square and non-empty");
  const int p = static_cast<int>(gram_.rows());
  for (int a = 0; a < p; ++a) {
    if (!(gram_(a, a) >= 0.0)) fail(ErrorCode::InvalidArgument, "Gram matrix has a negative diagonal entry");
    for (int b = a + 1; b < p; ++b) {
      const double scale = std::max({std::abs(gram_(a, b)), std::abs(gram_(b, a)), 1.0});
      if (std::abs(gram_(a, b) - gram_(b, a)) > 1e-12 * scale)
        fail(ErrorCode::InvalidArgument, "Gram matrix is not symmetric");
      gram_(b, a) = gram_(a, b);
    }
  }
  const double nd = static_cast<double>(n_);
  const double log_pi = std::log(std::numbers::pi);
  log_constant_.resize(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    log_constant_[static_cast<std::size_t>(k)] = -0.5 * (nd - 1.0) * log_pi + std::lgamma(0.5 * (nd + k)) -
                                                 std::lgamma(0.5 * (k + 1.0)) - 0.5 * (2.0 * k + 1.0) * std::log(nd);
  }
}

SufficientStats SufficientStats::from_data(const Eigen::MatrixXd& x) {
  require(x.rows() >= 1 && x.cols() >= 1, "data matrix must be non-empty");
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  u.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  Eigen::MatrixXd full = u.selfadjointView<Eigen::Lower>();
  return SufficientStats(x.rows(), std::move(full));
}

ScoreStatus score_node(const SufficientStats& stats, int h, std::span<const int> sorted_nb, double& out) noexcept {
  const int k = static_cast<int>(sorted_nb.size());
  out = kNegInf;
  if (stats.n() < k + 1) return ScoreStatus::SampleSizeTooSmall;
  const int dim = k + 1;
  auto& a = tl_factor;
  if (a.size() < static_cast<std::size_t>(dim) * dim) a.resize(static_cast<std::size_t>(dim) * dim);
  const Eigen::MatrixXd& u = stats.gram();
  // Lower triangle of U restricted to nb ∪ {h}, with h as the last variable.
  for (int r = 0; r < dim; ++r) {
    const int vr = r < k ? sorted_nb[static_cast<std::size_t>(r)] : h;
    double* row = a.data() + static_cast<std::ptrdiff_t>(r) * dim;
    for (int c = 0; c <= r; ++c) {
      const int vc = c < k ? sorted_nb[static_cast<std::size_t>(c)] : h;
      row[c] = u(vr, vc);
    }
  }
  const double schur = trailing_schur_complement(a.data(), dim);
  if (!(schur > 0.0) || !std::isfinite(schur)) return ScoreStatus::NotPositiveDefinite;
  // log|U_{nb∪h}| - log|U_nb| is the log of the trailing Schur complement.
  out = stats.log_constant(k) - 0.5 * (static_cast<double>(stats.n()) - 1.0) * std::log(schur);
  return ScoreStatus::Ok;
}

double log_node_mpl(const SufficientStats& stats, int h, std::span<const int> nb) {
  const int p = stats.p();
  require(h >= 0 && h < p, "node index out of range");
  std::vector<int> sorted(nb.begin(), nb.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    require(sorted[t] >= 0 && sorted[t] < p, "neighbor index out of range");
    require(sorted[t] != h, "node cannot be its own neighbor");
    require(t == 0 || sorted[t] != sorted[t - 1], "duplicate neighbor");
  }
  double out = 0.0;
  switch (score_node(stats, h, sorted, out)) {
    case ScoreStatus::Ok: return out;
    case ScoreStatus::SampleSizeTooSmall:
      fail(ErrorCode::SampleSizeTooSmall, "node " + std::to_string(h + 1) + ": n=" + std::to_string(stats.n()) +
                                              " is below neighborhood size + 1 = " +
                                              std::to_string(sorted.size() + 1));
    case ScoreStatus::NotPositiveDefinite:
      fail(ErrorCode::PositiveDefinitenessViolated,
           "node " + std::to_string(h + 1) + ": Gram submatrix is not positive definite");
  }
  return out;
}

namespace {

// Neighbors of `node` in g with `other` toggled, written sorted into `buf`.
std::span<const int> toggled_neighbors(const Graph& g, int node, int other, std::vector<int>& buf) {
  const auto nb = g.neighbors(node);
  buf.clear();
  auto it = std::lower_bound(nb.begin(), nb.end(), other);
  const bool present = it != nb.end() && *it == other;
  buf.insert(buf.end(), nb.begin(), it);
  if (present) {
    buf.insert(buf.end(), it + 1, nb.end());
  } else {
    buf.push_back(other);
    buf.insert(buf.end(), it, nb.end());
  }
  return buf;
}

}  // namespace

double log_bayes_factor(const SufficientStats& stats, const Graph& g, Edge e) {
  if (g.node_count() != stats.p()) fail(ErrorCode::DimensionMismatch, "graph and statistics disagree on p");
  require(e.i != e.j, "edge endpoints must differ");
  std::vector<int> buf;
  const double old_i = log_node_mpl(stats, e.i, g.neighbors(e.i));
  const double old_j = log_node_mpl(stats, e.j, g.neighbors(e.j));
  const double new_i = log_node_mpl(stats, e.i, toggled_neighbors(g, e.i, e.j, buf));
  const double new_j = log_node_mpl(stats, e.j, toggled_neighbors(g, e.j, e.i, buf));
  return (new_i - old_i) + (new_j - old_j);
}

MplCache::MplCache(const SufficientStats& stats, const Graph& g) {
  if (g.node_count() != stats.p()) fail(ErrorCode::DimensionMismatch, "graph and statistics disagree on p");
  const int p = g.node_count();
  node_.resize(static_cast<std::size_t>(p));
  total_ = 0.0;
  for (int h = 0; h < p; ++h) {
    node_[static_cast<std::size_t>(h)] = log_node_mpl(stats, h, g.neighbors(h));
    total_ += node_[static_cast<std::size_t>(h)];
  }
}

void MplCache::refresh(const SufficientStats& stats, const Graph& g_post_flip, Edge e) {
  const double new_i = log_node_mpl(stats, e.i, g_post_flip.neighbors(e.i));
  const double new_j = log_node_mpl(stats, e.j, g_post_flip.neighbors(e.j));
  auto& slot_i = node_[static_cast<std::size_t>(e.i)];
  auto& slot_j = node_[static_cast<std::size_t>(e.j)];
  total_ += (new_i - slot_i) + (new_j - slot_j);
  slot_i = new_i;
  slot_j = new_j;
}

double cached_log_bayes_factor(const SufficientStats& stats, const Graph& g, const MplCache& cache, Edge e) noexcept {
  auto& buf = tl_index;
  double new_i = 0.0;
  double new_j = 0.0;
  if (score_node(stats, e.i, toggled_neighbors(g, e.i, e.j, buf), new_i) != ScoreStatus::Ok) return kNegInf;
  if (score_node(stats, e.j, toggled_neighbors(g, e.j, e.i, buf), new_j) != ScoreStatus::Ok) return kNegInf;
  return (new_i - cache.node(e.i)) + (new_j - cache.node(e.j));
}

}  // namespace ggmpl
