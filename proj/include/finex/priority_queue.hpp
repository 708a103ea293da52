#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "finex/model.hpp"

namespace finex {

/// Min-priority queue over object ids with decrease-key. Ties pop in
/// insertion order; an updated element is ordered as if freshly inserted at
/// its new priority, i.e. behind every element already holding that
/// priority. An id is present at most once.
class StablePriorityQueue {
 public:
  explicit StablePriorityQueue(std::size_t universe) : slot_(universe, kAbsent) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(ObjectId id) const { return slot_[id] != kAbsent; }

  double priority(ObjectId id) const {
    if (!contains(id)) throw std::logic_error("priority of an id that is not queued");
    return heap_[slot_[id]].priority;
  }

  void insert(ObjectId id, double priority) {
    if (contains(id)) throw std::logic_error("id already queued");
    heap_.push_back({priority, next_seq_++, id});
    slot_[id] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
  }

  /// Lowers the priority of a queued id. The element moves behind any
  /// element that already has the new priority.
  void decrease(ObjectId id, double priority) {
    if (!contains(id)) throw std::logic_error("decrease of an id that is not queued");
    auto& e = heap_[slot_[id]];
    if (priority > e.priority) throw std::logic_error("decrease must not raise the priority");
    e.priority = priority;
    e.seq = next_seq_++;
    // A fresh sequence number can push the element down among equals.
    const std::size_t at = sift_up(slot_[id]);
    sift_down(at);
  }

  ObjectId pop() {
    if (heap_.empty()) throw std::logic_error("pop from empty queue");
    const ObjectId top = heap_.front().id;
    swap_slots(0, heap_.size() - 1);
    heap_.pop_back();
    slot_[top] = kAbsent;
    if (!heap_.empty()) sift_down(0);
    return top;
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  struct Entry {
    double priority;
    std::uint64_t seq;
    ObjectId id;

    bool before(const Entry& o) const { return priority < o.priority || (priority == o.priority && seq < o.seq); }
  };

  void swap_slots(std::size_t a, std::size_t b) {
    std::swap(heap_[a], heap_[b]);
    slot_[heap_[a].id] = a;
    slot_[heap_[b].id] = b;
  }

  std::size_t sift_up(std::size_t i) {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_[i].before(heap_[parent])) break;
      swap_slots(i, parent);
      i = parent;
    }
    return i;
  }

  void sift_down(std::size_t i) {
    for (;;) {
      const std::size_t l = 2 * i + 1;
      const std::size_t r = l + 1;
      std::size_t best = i;
      if (l < heap_.size() && heap_[l].before(heap_[best])) best = l;
      if (r < heap_.size() && heap_[r].before(heap_[best])) best = r;
      if (best == i) return;
      swap_slots(i, best);
      i = best;
    }
  }

  std::vector<Entry> heap_;
  std::vector<std::size_t> slot_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace finex
