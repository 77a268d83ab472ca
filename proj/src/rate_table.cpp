#include "rate_table.hpp"

#include <string>

#include "error.hpp"

namespace ggmpl {

RateTable::RateTable(std::span<const double> rates) : size_(static_cast<std::int64_t>(rates.size())) {
  capacity_ = 1;
  while (capacity_ < rates.size()) capacity_ <<= 1;
  tree_.assign(2 * capacity_, 0.0);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    require(rates[k] >= 0.0 && rates[k] <= 1.0, "rate outside [0, 1] at edge " + std::to_string(k));
    tree_[capacity_ + k] = rates[k];
  }
  for (std::size_t v = capacity_ - 1; v >= 1; --v) tree_[v] = tree_[2 * v] + tree_[2 * v + 1];
}

std::vector<double> RateTable::rates() const {
  return {tree_.begin() + static_cast<std::ptrdiff_t>(capacity_),
          tree_.begin() + static_cast<std::ptrdiff_t>(capacity_) + size_};
}

void RateTable::set(std::int64_t edge, double rate) {
  require(edge >= 0 && edge < size_, "edge index out of range");
  require(rate >= 0.0 && rate <= 1.0, "rate outside [0, 1] at edge " + std::to_string(edge));
  std::size_t v = leaf(edge);
  tree_[v] = rate;
  for (v >>= 1; v >= 1; v >>= 1) tree_[v] = tree_[2 * v] + tree_[2 * v + 1];
}

std::int64_t RateTable::find(double target) const {
  if (!(sum() > 0.0)) fail(ErrorCode::DegenerateChain, "all birth/death rates are zero");
  std::size_t v = 1;
  while (v < capacity_) {
    const double left = tree_[2 * v];
    const double right = tree_[2 * v + 1];
    // Rounding can push the target past a subtree; never descend into an empty one.
    if ((target < left && left > 0.0) || !(right > 0.0)) {
      v = 2 * v;
    } else {
      target -= left;
      v = 2 * v + 1;
    }
  }
  return static_cast<std::int64_t>(v - capacity_);
}

}  // namespace ggmpl
