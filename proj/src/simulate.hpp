#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "graph.hpp"
#include "rng.hpp"

namespace ggmpl {

enum class GraphKind { Random, Cluster, ScaleFree };
enum class Density { Sparse, Dense };
enum class SampleLevel { Low, High };

const char* to_string(GraphKind kind) noexcept;
const char* to_string(Density density) noexcept;
GraphKind parse_graph_kind(const std::string& text);
Density parse_density(const std::string& text);

struct InstanceSpec {
  int p = 10;
  GraphKind kind = GraphKind::Random;
  Density density = Density::Sparse;
  int clusters = 0;  // 0 picks the default for p
  std::int64_t n = 0;  // 0 picks the high-sample default for p
  double b = 3.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// round-half-up of max(a·p, b·p(p-1)/2) with (a, b) = (0.5, 0.5%) sparse, (2, 5%) dense.
std::int64_t target_edge_count(int p, Density density);

/// ceil(c·log10 p) with c = 20 (low) or 350 (high); the low level at p = 1000 is 400.
std::int64_t default_sample_size(int p, SampleLevel level);

/// Two clusters below p = 1000, eight from there on.
int default_cluster_count(int p);

/// Node → cluster assignment, contiguous blocks whose sizes differ by at most one.
std::vector<int> cluster_assignment(int p, int clusters);

/// Random: n_e distinct pairs uniformly without replacement. Cluster: n_e
/// pairs uniformly without replacement among within-cluster pairs.
/// Scale-free: Barabási–Albert tree with one attachment edge per new node.
Graph gen_graph(const InstanceSpec& spec, Rng& rng);

struct Instance {
  Graph graph;
  Eigen::MatrixXd precision;
  Eigen::MatrixXd data;  // n × p
};

/// Graph, K ~ W_G(b, I_p), and n rows from N_p(0, K⁻¹). Deterministic in spec.seed.
Instance gen_instance(const InstanceSpec& spec);

/// n rows from N_p(0, K⁻¹) via the Cholesky factor of the covariance.
Eigen::MatrixXd sample_gaussian(const Eigen::MatrixXd& precision, std::int64_t n, Rng& rng);

/// Rank-based Gaussianization: each column's average ranks r mapped to
/// Φ⁻¹(r / (n + 1)), then centered. Throws ConstantColumn for columns
/// with fewer than two distinct values.
Eigen::MatrixXd nonparanormal_transform(const Eigen::MatrixXd& x);

}  // namespace ggmpl
