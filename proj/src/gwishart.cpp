#include "gwishart.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "error.hpp"

namespace ggmpl {

namespace {

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) fail(ErrorCode::PositiveDefinitenessViolated, std::string(what) + " is not positive definite");
  return llt.matrixL();
}

// Lower Cholesky factor of D⁻¹, reused across draws.
Eigen::MatrixXd inverse_scale_factor(const GWishartParams& params) {
  const Eigen::MatrixXd lower = lower_cholesky(params.D, "scale matrix D");
  const Eigen::Index p = params.D.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(p, p);
  lower.triangularView<Eigen::Lower>().solveInPlace(inv);
  Eigen::MatrixXd d_inv = inv.transpose() * inv;
  return lower_cholesky(0.5 * (d_inv + d_inv.transpose()), "inverse scale matrix");
}

Eigen::MatrixXd bartlett(const Eigen::MatrixXd& scale_factor, double df, Rng& rng) {
  const Eigen::Index p = scale_factor.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    boost::random::chi_squared_distribution<double> chi2(df - static_cast<double>(i));
    a(i, i) = std::sqrt(chi2(rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = standard_normal(rng);
  }
  const Eigen::MatrixXd la = scale_factor * a.triangularView<Eigen::Lower>();
  Eigen::MatrixXd k = la * la.transpose();
  return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) fail(ErrorCode::PositiveDefinitenessViolated, std::string(what) + " is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return 0.5 * (inv + inv.transpose());
}

GWishartDraw complete_pattern(const Graph& g, Eigen::MatrixXd k_free, double tol, int max_sweeps) {
  const int p = g.node_count();
  GWishartDraw draw;
  if (g.edge_count() == pair_count(p)) {
    draw.K = std::move(k_free);
    return draw;
  }
  const Eigen::MatrixXd sigma = spd_inverse(k_free, "unconstrained draw");
  Eigen::MatrixXd w = sigma;
  Eigen::VectorXd column(p);
  for (int sweep = 1;; ++sweep) {
    double change = 0.0;
    for (int j = 0; j < p; ++j) {
      const auto nb = g.neighbors(j);
      const auto m = static_cast<Eigen::Index>(nb.size());
      if (m == 0) {
        column.setZero();
      } else {
        Eigen::MatrixXd w_nb(m, m);
        Eigen::VectorXd rhs(m);
        for (Eigen::Index a = 0; a < m; ++a) {
          rhs(a) = sigma(nb[static_cast<std::size_t>(a)], j);
          for (Eigen::Index b = 0; b < m; ++b) w_nb(a, b) = w(nb[static_cast<std::size_t>(a)], nb[static_cast<std::size_t>(b)]);
        }
        Eigen::LLT<Eigen::MatrixXd> llt(w_nb);
        if (llt.info() != Eigen::Success)
          fail(ErrorCode::PositiveDefinitenessViolated, "neighbor block of the completed covariance is not positive definite");
        const Eigen::VectorXd beta = llt.solve(rhs);
        column.setZero();
        for (Eigen::Index a = 0; a < m; ++a) column += w.col(nb[static_cast<std::size_t>(a)]) * beta(a);
      }
      for (int r = 0; r < p; ++r) {
        if (r == j) continue;
        change = std::max(change, std::abs(column(r) - w(r, j)));
        w(r, j) = column(r);
        w(j, r) = column(r);
      }
    }
    draw.residuals.push_back(change);
    draw.sweeps = sweep;
    if (change < tol) break;
    if (sweep >= max_sweeps)
      fail(ErrorCode::NonConvergence, "G-Wishart completion did not converge after " + std::to_string(max_sweeps) +
                                          " sweeps; final max change " + std::to_string(change));
  }
  Eigen::MatrixXd k = spd_inverse(w, "completed covariance");
  // Off-pattern entries are zero up to the completion tolerance; snap them.
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) k(i, j) = k(j, i) = 0.0;
  draw.K = std::move(k);
  return draw;
}

}  // namespace

void GWishartParams::validate() const {
  if (!(b > 2.0)) fail(ErrorCode::InvalidArgument, "G-Wishart shape b must exceed 2, got " + std::to_string(b));
  if (D.rows() != D.cols() || D.rows() < 1) fail(ErrorCode::DimensionMismatch, "scale matrix D must be square");
  if (!D.isApprox(D.transpose(), 1e-12)) fail(ErrorCode::InvalidArgument, "scale matrix D must be symmetric");
  lower_cholesky(D, "scale matrix D");
}

GWishartParams GWishartParams::identity(int p, double b) {
  return GWishartParams{b, Eigen::MatrixXd::Identity(p, p)};
}

Eigen::MatrixXd sample_wishart(const GWishartParams& params, Rng& rng) {
  params.validate();
  const double df = params.b + static_cast<double>(params.D.rows()) - 1.0;
  return bartlett(inverse_scale_factor(params), df, rng);
}

GWishartDraw sample_gwishart(const Graph& g, const GWishartParams& params, Rng& rng, double tol, int max_sweeps) {
  params.validate();
  if (g.node_count() != params.D.rows()) fail(ErrorCode::DimensionMismatch, "graph and scale matrix disagree on p");
  require(tol > 0.0, "completion tolerance must be positive");
  require(max_sweeps >= 1, "max sweeps must be >= 1");
  return complete_pattern(g, sample_wishart(params, rng), tol, max_sweeps);
}

Eigen::MatrixXd estimate_precision(const SufficientStats& stats, const Graph& g, const GWishartParams& prior,
                                   std::int64_t draws, std::uint64_t seed, int threads) {
  require(draws >= 1, "draw count must be >= 1");
  require(threads >= 1, "thread count must be >= 1");
  if (g.node_count() != stats.p() || prior.D.rows() != stats.p())
    fail(ErrorCode::DimensionMismatch, "graph, prior scale and data disagree on p");
  GWishartParams posterior{prior.b + static_cast<double>(stats.n()), prior.D + stats.gram()};
  posterior.validate();
  const double df = posterior.b + static_cast<double>(stats.p()) - 1.0;
  const Eigen::MatrixXd factor = inverse_scale_factor(posterior);

  auto one = [&](std::int64_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    return complete_pattern(g, bartlett(factor, df, rng), 1e-8, 1000).K;
  };

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(stats.p(), stats.p());
  if (threads == 1) {
    for (std::int64_t t = 0; t < draws; ++t) sum += one(t);
  } else {
    const std::int64_t batch = std::max<std::int64_t>(threads, 1);
    for (std::int64_t first = 0; first < draws; first += batch) {
      const std::int64_t last = std::min(draws, first + batch);
      std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(last - first));
      std::vector<std::exception_ptr> errors(out.size());
      std::vector<std::thread> pool;
      for (std::int64_t t = first; t < last; ++t) {
        pool.emplace_back([&, t] {
          try {
            out[static_cast<std::size_t>(t - first)] = one(t);
          } catch (...) {
            errors[static_cast<std::size_t>(t - first)] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (std::size_t q = 0; q < out.size(); ++q) {
        if (errors[q]) std::rethrow_exception(errors[q]);
        sum += out[q];
      }
    }
  }
  return sum / static_cast<double>(draws);
}

}  // namespace ggmpl
