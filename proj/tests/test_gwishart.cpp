#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "fixtures.hpp"
#include "gwishart.hpp"

using namespace ggmpl;

namespace {

bool is_pd(const Eigen::MatrixXd& m) { return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success; }

Graph path3() { return Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}}); }

Eigen::MatrixXd spd(int p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = standard_normal(rng);
  return a * a.transpose() / p + Eigen::MatrixXd::Identity(p, p);
}

// Entry-wise mean and standard error over a sample of matrices.
struct Moments {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd se;
};

Moments moments(const std::vector<Eigen::MatrixXd>& draws) {
  const auto n = static_cast<double>(draws.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(draws[0].rows(), draws[0].cols());
  Eigen::MatrixXd sq = sum;
  for (const auto& d : draws) {
    sum += d;
    sq += d.cwiseProduct(d);
  }
  Moments m;
  m.mean = sum / n;
  const Eigen::MatrixXd var = (sq / n - m.mean.cwiseProduct(m.mean)) * (n / (n - 1.0));
  m.se = (var / n).cwiseSqrt();
  return m;
}

void check_within_3se(const Moments& m, const Eigen::MatrixXd& expected) {
  for (Eigen::Index i = 0; i < expected.rows(); ++i)
    for (Eigen::Index j = 0; j < expected.cols(); ++j) {
      INFO("entry (" << i << ", " << j << ") mean " << m.mean(i, j) << " expected " << expected(i, j));
      CHECK(std::abs(m.mean(i, j) - expected(i, j)) <= 3.0 * m.se(i, j) + 1e-12);
    }
}

// Two-sample Kolmogorov–Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(GWishartParams({2.0, Eigen::MatrixXd::Identity(2, 2)}).validate(), Error);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  try {
    GWishartParams{3.0, indefinite}.validate();
    FAIL("expected PositiveDefinitenessViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PositiveDefinitenessViolated);
  }
  CHECK_NOTHROW(GWishartParams::identity(4).validate());
  Rng rng(1);
  CHECK_THROWS_AS(sample_gwishart(Graph(3), GWishartParams::identity(4), rng), Error);
}

TEST_CASE("univariate draws are Gamma with mean b/d") {
  const double b = 3.0;
  const double d = 2.5;
  GWishartParams params{b, Eigen::MatrixXd::Constant(1, 1, d)};
  Rng rng(42);
  std::vector<Eigen::MatrixXd> draws;
  for (int t = 0; t < 100000; ++t) draws.push_back(sample_wishart(params, rng));
  check_within_3se(moments(draws), Eigen::MatrixXd::Constant(1, 1, b / d));
}

TEST_CASE("unconstrained draws satisfy the Wishart moment identity") {
  const int p = 3;
  const double b = 3.0;
  const GWishartParams params{b, spd(p, 5)};
  Rng rng(7);
  std::vector<Eigen::MatrixXd> draws;
  for (int t = 0; t < 100000; ++t) {
    draws.push_back(sample_wishart(params, rng));
    if (t < 2000) CHECK(is_pd(draws.back()));
  }
  check_within_3se(moments(draws), (b + p - 1) * params.D.inverse());
}

TEST_CASE("complete graph reduces to the unconstrained draw") {
  const GWishartParams params{4.0, spd(4, 9)};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng a(seed);
    Rng b(seed);
    const GWishartDraw draw = sample_gwishart(Graph::complete(4), params, a);
    CHECK(draw.sweeps == 0);
    CHECK(draw.K == sample_wishart(params, b));
  }
}

TEST_CASE("empty graph gives diagonal draws") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd k = sample_gwishart(Graph(5), GWishartParams::identity(5), rng).K;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) CHECK(std::abs(k(i, j)) < 1e-8);
    CHECK(is_pd(k));
  }
}

TEST_CASE("path graph draws respect the zero pattern and are positive definite") {
  Rng rng(2);
  int failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const Eigen::MatrixXd k = sample_gwishart(path3(), GWishartParams::identity(3), rng).K;
    if (!(std::abs(k(0, 2)) < 1e-8 && std::abs(k(2, 0)) < 1e-8 && is_pd(k))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("completion residuals never increase after the first sweep") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const Graph g = fixture::random_graph(7, 0.35, rng);
    const GWishartDraw draw = sample_gwishart(g, GWishartParams{3.0, spd(7, rep + 100)}, rng);
    CHECK(draw.residuals.size() == static_cast<std::size_t>(draw.sweeps));
    for (std::size_t s = 2; s < draw.residuals.size(); ++s) CHECK(draw.residuals[s] <= draw.residuals[s - 1]);
    const Eigen::MatrixXd& k = draw.K;
    CHECK(is_pd(k));
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        if (!g.has_edge(i, j)) CHECK(std::abs(k(i, j)) < 1e-8);
  }
}

TEST_CASE("non-convergence is reported") {
  // A five-cycle is not chordal, so one sweep cannot reach a 1e-300 tolerance.
  const Graph cycle = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  Rng rng(4);
  try {
    (void)sample_gwishart(cycle, GWishartParams::identity(5), rng, 1e-300, 1);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
}

TEST_CASE("full-graph G-Wishart and Wishart draws agree in distribution") {
  const GWishartParams params = GWishartParams::identity(3);
  Rng a(100);
  Rng b(200);
  std::vector<double> x;
  std::vector<double> y;
  for (int t = 0; t < 10000; ++t) {
    x.push_back(sample_gwishart(Graph::complete(3), params, a).K(0, 0));
    y.push_back(sample_wishart(params, b)(0, 0));
  }
  // Critical value at α = 0.001 for equal sample sizes.
  const double critical = std::sqrt(-0.5 * std::log(0.001 / 2.0)) * std::sqrt(2.0 / 10000.0);
  CHECK(ks_statistic(x, y) < critical);
}

TEST_CASE("posterior mean from a single draw is that draw") {
  const Eigen::MatrixXd x = fixture::correlated_data(30, 4, 6);
  const SufficientStats stats = SufficientStats::from_data(x);
  const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const GWishartParams prior = GWishartParams::identity(4);
  const Eigen::MatrixXd mean = estimate_precision(stats, g, prior, 1, 55);
  Rng rng(derive_seed(55, std::uint64_t{0}));
  const Eigen::MatrixXd single = sample_gwishart(g, GWishartParams{prior.b + 30, prior.D + stats.gram()}, rng).K;
  CHECK((mean - single).cwiseAbs().maxCoeff() <= 1e-12 * single.cwiseAbs().maxCoeff());
}

TEST_CASE("empty-graph posterior mean follows the univariate reduction") {
  const int n = 20;
  const Eigen::MatrixXd x = fixture::correlated_data(n, 3, 8);
  const SufficientStats stats = SufficientStats::from_data(x);
  const double b = 3.0;
  std::vector<Eigen::MatrixXd> draws;
  const GWishartParams post{b + n, Eigen::MatrixXd::Identity(3, 3) + stats.gram()};
  for (int t = 0; t < 100000; ++t) {
    Rng rng(derive_seed(9, static_cast<std::uint64_t>(t)));
    draws.push_back(sample_gwishart(Graph(3), post, rng).K);
  }
  const Moments m = moments(draws);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  for (int h = 0; h < 3; ++h) expected(h, h) = (b + n) / (1.0 + stats.gram(h, h));
  for (int h = 0; h < 3; ++h) {
    INFO("node " << h);
    CHECK(std::abs(m.mean(h, h) - expected(h, h)) <= 3.0 * m.se(h, h));
  }
  const Eigen::MatrixXd est = estimate_precision(stats, Graph(3), GWishartParams::identity(3), 2000, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(est(i, j)) < 1e-8);
}

TEST_CASE("posterior mean on a p = 5 instance") {
  const Eigen::MatrixXd x = fixture::correlated_data(60, 5, 13);
  const SufficientStats stats = SufficientStats::from_data(x);
  const Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  const Eigen::MatrixXd mean = estimate_precision(stats, g, GWishartParams::identity(5), 10000, 3);
  CHECK(is_pd(mean));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (!g.has_edge(i, j)) CHECK(std::abs(mean(i, j)) < 1e-8);
  CHECK(mean == mean.transpose());
  const Eigen::MatrixXd threaded = estimate_precision(stats, g, GWishartParams::identity(5), 300, 3, 4);
  CHECK(threaded == estimate_precision(stats, g, GWishartParams::identity(5), 300, 3, 1));
  CHECK_THROWS_AS(estimate_precision(stats, g, GWishartParams::identity(5), 0, 3), Error);
  CHECK_THROWS_AS(estimate_precision(stats, Graph(4), GWishartParams::identity(5), 1, 3), Error);
}
