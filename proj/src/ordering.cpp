#include "finex/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace finex {

ClusterOrdering::ClusterOrdering(std::vector<IndexEntry> entries, GeneratingParams params, Flavor flavor)
    : entries_(std::move(entries)), params_(params), flavor_(flavor) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  index_of_.assign(entries_.size(), kUnset);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.position != i + 1) {
      throw DataError("ordering position " + std::to_string(e.position) + " at index " + std::to_string(i));
    }
    if (e.object >= entries_.size() || index_of_[e.object] != kUnset) {
      throw DataError("ordering is not a permutation (object " + std::to_string(e.object) + ")");
    }
    if (e.finder >= entries_.size()) throw DataError("finder reference out of range");
    index_of_[e.object] = i;
  }
}

std::vector<ObjectId> outer_loop_order(std::size_t n, const BuildOptions& options) {
  std::vector<ObjectId> order(n);
  std::iota(order.begin(), order.end(), ObjectId{0});
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

}  // namespace finex
