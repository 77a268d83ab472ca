#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"
#include "mpl.hpp"
#include "rng.hpp"

namespace ggmpl {

/// Shape b and scale D of W_G(b, D), density ∝ |K|^{(b-2)/2} exp(-tr(KD)/2)
/// on the positive-definite matrices with K_ij = 0 off the edge set.
struct GWishartParams {
  double b = 3.0;
  Eigen::MatrixXd D;

  /// Throws unless b > 2 and D is symmetric positive definite.
  void validate() const;
  static GWishartParams identity(int p, double b = 3.0);
};

/// Unconstrained draw (complete graph). In the standard parameterization this
/// is Wishart with df = b + p - 1 and scale D⁻¹, drawn by Bartlett decomposition.
Eigen::MatrixXd sample_wishart(const GWishartParams& params, Rng& rng);

struct GWishartDraw {
  Eigen::MatrixXd K;
  int sweeps = 0;
  std::vector<double> residuals;  // max |ΔW| after each sweep
};

/// Direct G-Wishart sampler: an unconstrained Wishart draw whose implied
/// covariance is completed by cyclic per-node regressions on each node's
/// neighbors until a full sweep changes no entry by more than `tol`.
/// Throws NonConvergence after `max_sweeps`.
GWishartDraw sample_gwishart(const Graph& g, const GWishartParams& params, Rng& rng, double tol = 1e-8,
                             int max_sweeps = 1000);

/// Entry-wise mean of `draws` samples from the posterior W_G(b + n, D + U).
/// Draw t uses the RNG stream derive_seed(seed, t); with threads > 1 draws
/// are generated concurrently and then averaged in draw order.
Eigen::MatrixXd estimate_precision(const SufficientStats& stats, const Graph& g, const GWishartParams& prior,
                                   std::int64_t draws, std::uint64_t seed, int threads = 1);

}  // namespace ggmpl
