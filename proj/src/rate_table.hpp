#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ggmpl {

/// Birth/death rates indexed by canonical edge index, stored as the leaves of
/// a complete binary sum tree. The running total is the root of that tree, so
/// it is always the same fixed-order reduction over canonical edge order no
/// matter how the leaves were updated.
class RateTable {
 public:
  RateTable() = default;
  explicit RateTable(std::span<const double> rates);

  std::int64_t size() const noexcept { return size_; }
  double rate(std::int64_t edge) const noexcept { return tree_[leaf(edge)]; }
  double sum() const noexcept { return size_ == 0 ? 0.0 : tree_[1]; }
  std::vector<double> rates() const;

  void set(std::int64_t edge, double rate);

  /// Inverse CDF over canonical edge order: the edge e whose cumulative
  /// interval [Σ_{k<e} r_k, Σ_{k≤e} r_k) contains `target`, with
  /// 0 ≤ target < sum(). Zero-rate edges are never returned.
  std::int64_t find(double target) const;

 private:
  std::size_t leaf(std::int64_t edge) const noexcept { return capacity_ + static_cast<std::size_t>(edge); }

  std::int64_t size_ = 0;
  std::size_t capacity_ = 0;
  std::vector<double> tree_;
};

}  // namespace ggmpl
