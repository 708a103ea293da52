#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "finex/model.hpp"

namespace finex {

enum class Flavor : std::uint8_t { kOptics, kFinex };

/// Per-object attributes of a cluster ordering.
struct IndexEntry {
  ObjectId object = 0;
  std::uint64_t position = 0;       // P, 1-based
  double core = kInfinity;          // C
  double reach = kInfinity;         // R
  std::uint64_t hood_size = 0;      // N, duplicate-weighted |N_eps|
  ObjectId finder = 0;              // F

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// Permutation of a dataset with per-object (P, C, R, N, F). Entries are
/// stored in position order; lookups by object id are O(1).
class ClusterOrdering {
 public:
  /// Validates that entries form a permutation of 0..n-1 with positions
  /// 1..n in sequence order. Throws DataError otherwise.
  ClusterOrdering(std::vector<IndexEntry> entries, GeneratingParams params, Flavor flavor);

  std::size_t size() const { return entries_.size(); }
  const GeneratingParams& params() const { return params_; }
  Flavor flavor() const { return flavor_; }

  std::span<const IndexEntry> entries() const { return entries_; }
  const IndexEntry& operator[](std::size_t index) const { return entries_[index]; }
  /// 0-based index into entries() of the given object.
  std::size_t index_of(ObjectId id) const { return index_of_[id]; }
  const IndexEntry& entry_of(ObjectId id) const { return entries_[index_of_[id]]; }

  bool is_core(ObjectId id) const { return entry_of(id).core <= params_.epsilon; }

  friend bool operator==(const ClusterOrdering& a, const ClusterOrdering& b) {
    return a.flavor_ == b.flavor_ && a.params_.epsilon == b.params_.epsilon &&
           a.params_.min_pts == b.params_.min_pts && a.entries_ == b.entries_;
  }

 private:
  std::vector<IndexEntry> entries_;
  std::vector<std::size_t> index_of_;
  GeneratingParams params_;
  Flavor flavor_;
};

/// Outer-loop seed policy shared by every build. Without a seed the
/// smallest unprocessed id is taken; with a seed, ids are visited in a
/// seeded random permutation.
struct BuildOptions {
  std::optional<std::uint64_t> seed;
};

std::vector<ObjectId> outer_loop_order(std::size_t n, const BuildOptions& options);

}  // namespace finex
