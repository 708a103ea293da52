#pragma once

#include <cstdint>
#include <vector>

#include "finex/neighbors.hpp"
#include "finex/ordering.hpp"
#include "finex/priority_queue.hpp"

namespace finex {

/// Build-once index: a FINEX-flavored cluster ordering plus the identity of
/// the dataset it was built from. Immutable.
class FinexIndex {
 public:
  FinexIndex(ClusterOrdering ordering, MetricKind metric, Fingerprint fingerprint);

  const ClusterOrdering& ordering() const { return ordering_; }
  const GeneratingParams& params() const { return ordering_.params(); }
  MetricKind metric() const { return metric_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  std::size_t size() const { return ordering_.size(); }
  std::size_t core_count() const;

  /// Throws DataError unless `data` is the dataset this index was built from.
  void check_dataset(const Dataset& data) const;

  friend bool operator==(const FinexIndex&, const FinexIndex&) = default;

 private:
  ClusterOrdering ordering_;
  MetricKind metric_;
  Fingerprint fingerprint_;
};

struct BuildStats {
  std::vector<std::uint32_t> reinsertions;  // per object id
  std::uint64_t range_queries = 0;
  std::uint64_t distance_computations = 0;
  std::uint64_t queue_inserts = 0;

  std::uint32_t max_reinsertions() const;
};

/// Mutable state of one ordering construction: the growing ordering (with
/// removal support), the priority queue, and the per-object attributes.
class OrderingBuilder {
 public:
  OrderingBuilder(std::size_t n, GeneratingParams params);

  /// Records C and N the first time an object is processed. Later calls for
  /// the same object keep the stored values.
  void set_attributes(ObjectId id, double core, std::uint64_t hood_size);
  bool has_attributes(ObjectId id) const { return has_attrs_[id] != 0; }

  /// Marks `id` processed and appends it to the ordering with its current R.
  void append(ObjectId id);
  /// Outer-loop start: R = infinity, then append.
  void append_unreached(ObjectId id);

  /// Queue maintenance for core object `c` with neighborhood `hood` (which
  /// contains c). Three cases per neighbor q: unqueued and unprocessed q is
  /// inserted; a queued q is decreased when reachable more cheaply; a
  /// processed non-core q that is reachable more cheaply is pulled out of
  /// the ordering and queued again. In every case q.F becomes c when c has
  /// strictly more neighbors than the current q.F.
  void queue_update(ObjectId c, const Neighborhood& hood);

  bool queue_empty() const { return queue_.empty(); }
  ObjectId pop() { return queue_.pop(); }

  bool processed(ObjectId id) const { return processed_[id] != 0; }
  bool queued(ObjectId id) const { return queue_.contains(id); }
  double reach(ObjectId id) const { return reach_[id]; }
  double core(ObjectId id) const { return core_[id]; }
  ObjectId finder(ObjectId id) const { return finder_[id]; }
  std::uint32_t reinsertions(ObjectId id) const { return reinsertions_[id]; }
  std::uint64_t queue_inserts() const { return inserts_; }

  /// Objects currently in the ordering, front to back.
  std::vector<ObjectId> current_order() const;

  const std::vector<std::uint32_t>& reinsertion_counts() const { return reinsertions_; }

  /// Every object must be processed and the queue drained.
  ClusterOrdering finish(Flavor flavor) const;

 private:
  static constexpr ObjectId kNil = static_cast<ObjectId>(-1);

  void link_back(ObjectId id);
  void unlink(ObjectId id);

  GeneratingParams params_;
  StablePriorityQueue queue_;
  std::vector<char> processed_;
  std::vector<char> has_attrs_;
  std::vector<double> core_;
  std::vector<double> reach_;
  std::vector<std::uint64_t> size_;
  std::vector<ObjectId> finder_;
  std::vector<std::uint32_t> reinsertions_;
  std::vector<ObjectId> prev_;
  std::vector<ObjectId> next_;
  ObjectId head_ = kNil;
  ObjectId tail_ = kNil;
  std::size_t linked_ = 0;
  std::uint64_t inserts_ = 0;
};

/// Builds the FINEX ordering. Non-core objects end up with their globally
/// minimal reachability distance; every object records N and its finder
/// reference. Performs exactly one range query per object.
FinexIndex finex_build(const NeighborProvider& provider, GeneratingParams params, const BuildOptions& options = {},
                       BuildStats* stats = nullptr);

}  // namespace finex
