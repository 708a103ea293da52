#include "finex/finex_build.hpp"

#include <algorithm>
#include <string>

namespace finex {

FinexIndex::FinexIndex(ClusterOrdering ordering, MetricKind metric, Fingerprint fingerprint)
    : ordering_(std::move(ordering)), metric_(metric), fingerprint_(fingerprint) {
  if (ordering_.flavor() != Flavor::kFinex) throw std::invalid_argument("index requires a FINEX ordering");
}

std::size_t FinexIndex::core_count() const {
  const double eps = params().epsilon;
  return static_cast<std::size_t>(std::count_if(ordering_.entries().begin(), ordering_.entries().end(),
                                                [eps](const IndexEntry& e) { return e.core <= eps; }));
}

void FinexIndex::check_dataset(const Dataset& data) const {
  if (data.metric() != metric_) {
    throw DataError("index was built for " + std::string(to_string(metric_)) + " data, got " +
                    std::string(to_string(data.metric())));
  }
  if (data.size() != size()) {
    throw DataError("index holds " + std::to_string(size()) + " objects, dataset has " +
                    std::to_string(data.size()));
  }
  if (data.fingerprint() != fingerprint_) {
    throw DataError("dataset fingerprint " + to_hex(data.fingerprint()) + " does not match index fingerprint " +
                    to_hex(fingerprint_));
  }
}

std::uint32_t BuildStats::max_reinsertions() const {
  return reinsertions.empty() ? 0 : *std::max_element(reinsertions.begin(), reinsertions.end());
}

OrderingBuilder::OrderingBuilder(std::size_t n, GeneratingParams params)
    : params_(params),
      queue_(n),
      processed_(n, 0),
      has_attrs_(n, 0),
      core_(n, kInfinity),
      reach_(n, kInfinity),
      size_(n, 0),
      finder_(n),
      reinsertions_(n, 0),
      prev_(n, kNil),
      next_(n, kNil) {
  for (std::size_t i = 0; i < n; ++i) finder_[i] = static_cast<ObjectId>(i);
}

void OrderingBuilder::set_attributes(ObjectId id, double core, std::uint64_t hood_size) {
  if (has_attrs_[id]) return;
  has_attrs_[id] = 1;
  core_[id] = core;
  size_[id] = hood_size;
}

void OrderingBuilder::link_back(ObjectId id) {
  prev_[id] = tail_;
  next_[id] = kNil;
  if (tail_ != kNil) {
    next_[tail_] = id;
  } else {
    head_ = id;
  }
  tail_ = id;
  ++linked_;
}

void OrderingBuilder::unlink(ObjectId id) {
  if (prev_[id] != kNil) {
    next_[prev_[id]] = next_[id];
  } else {
    head_ = next_[id];
  }
  if (next_[id] != kNil) {
    prev_[next_[id]] = prev_[id];
  } else {
    tail_ = prev_[id];
  }
  prev_[id] = next_[id] = kNil;
  --linked_;
}

void OrderingBuilder::append(ObjectId id) {
  if (processed_[id]) throw std::logic_error("object appended twice");
  processed_[id] = 1;
  link_back(id);
}

void OrderingBuilder::append_unreached(ObjectId id) {
  reach_[id] = kInfinity;
  append(id);
}

void OrderingBuilder::queue_update(ObjectId c, const Neighborhood& hood) {
  if (!(core_[c] <= params_.epsilon)) throw ContractViolation("queue update from a non-core object");
  const double c_core = core_[c];
  for (const auto& nb : hood.entries) {
    const ObjectId q = nb.id;
    const double rdist = std::max(c_core, nb.distance);
    if (!processed_[q] && !queue_.contains(q)) {
      reach_[q] = rdist;
      queue_.insert(q, rdist);
      ++inserts_;
    } else if (queue_.contains(q)) {
      if (rdist < reach_[q]) {
        reach_[q] = rdist;
        queue_.decrease(q, rdist);
      }
    } else if (core_[q] > params_.epsilon && rdist < reach_[q]) {
      unlink(q);
      processed_[q] = 0;
      reach_[q] = rdist;
      queue_.insert(q, rdist);
      ++inserts_;
      ++reinsertions_[q];
    }
    if (size_[c] > size_[finder_[q]]) finder_[q] = c;
  }
}

std::vector<ObjectId> OrderingBuilder::current_order() const {
  std::vector<ObjectId> out;
  out.reserve(linked_);
  for (ObjectId id = head_; id != kNil; id = next_[id]) out.push_back(id);
  return out;
}

ClusterOrdering OrderingBuilder::finish(Flavor flavor) const {
  if (linked_ != processed_.size() || !queue_.empty()) throw std::logic_error("ordering is incomplete");
  std::vector<IndexEntry> entries;
  entries.reserve(linked_);
  for (ObjectId id = head_; id != kNil; id = next_[id]) {
    entries.push_back({id, entries.size() + 1, core_[id], reach_[id], size_[id], finder_[id]});
  }
  return ClusterOrdering(std::move(entries), params_, flavor);
}

FinexIndex finex_build(const NeighborProvider& provider, GeneratingParams params, const BuildOptions& options,
                       BuildStats* stats) {
  params.validate();
  if (params.epsilon > provider.epsilon()) throw ContractViolation("provider epsilon is smaller than the build epsilon");
  const std::size_t n = provider.size();
  const auto& data = provider.dataset();
  OrderingBuilder builder(n, params);
  std::uint64_t range_queries = 0;
  std::uint64_t distances = 0;

  // Removed non-cores come back through the queue and keep their C and N, so
  // only first visits need a neighborhood. Cores are never removed.
  auto process = [&](ObjectId o, bool outer) {
    if (builder.has_attributes(o)) {
      if (outer) {
        builder.append_unreached(o);
      } else {
        builder.append(o);
      }
      return;
    }
    const auto hood = provider.range_query(o, params.epsilon, &distances);
    ++range_queries;
    builder.set_attributes(o, min_pts_distance(hood, data, params.min_pts), hood.size);
    if (outer) {
      builder.append_unreached(o);
    } else {
      builder.append(o);
    }
    if (builder.core(o) <= params.epsilon) builder.queue_update(o, hood);
  };

  for (ObjectId o : outer_loop_order(n, options)) {
    if (builder.processed(o)) continue;
    process(o, true);
    while (!builder.queue_empty()) process(builder.pop(), false);
  }

  if (stats) {
    stats->range_queries = range_queries;
    stats->distance_computations = distances;
    stats->queue_inserts = builder.queue_inserts();
    stats->reinsertions = builder.reinsertion_counts();
  }
  return FinexIndex(builder.finish(Flavor::kFinex), data.metric(), data.fingerprint());
}

}  // namespace finex
