#include <algorithm>
#include <cmath>
#include <numeric>

#include "backends.hpp"

namespace finex::detail {

namespace {

// Slack applied to the similarity threshold before deriving prefix and
// length bounds, so the filters stay supersets of the floating-point
// verification predicate.
constexpr double kThresholdSlack = 1e-9;

// Minimum overlap any set of size `size` must share with a partner whose
// Jaccard similarity is at least `threshold` (threshold > 0).
std::size_t required_overlap(std::size_t size, double threshold) {
  const double need = std::ceil(threshold * static_cast<double>(size));
  return need < 1.0 ? 1 : static_cast<std::size_t>(need);
}

std::size_t prefix_length(std::size_t size, double threshold) {
  if (threshold <= 0.0) return size;
  const std::size_t overlap = std::min(required_overlap(size, threshold), size);
  return size - overlap + 1;
}

// Inverted lists over frequency-ordered token prefixes with length
// filtering. Tokens are ranked by ascending document frequency so that
// prefixes consist of rare tokens; every candidate is verified with the
// exact Jaccard distance.
class InvertedListProvider final : public NeighborProvider {
 public:
  InvertedListProvider(const Dataset& data, double epsilon)
      : NeighborProvider(data, epsilon, Backend::kSetInvertedList) {
    const auto& sets = data.sets();
    std::vector<std::uint32_t> distinct;
    for (const auto& s : sets) distinct.insert(distinct.end(), s.tokens.begin(), s.tokens.end());
    std::sort(distinct.begin(), distinct.end());
    std::vector<std::uint32_t> freq;
    std::vector<std::uint32_t> tokens;
    for (std::size_t i = 0; i < distinct.size();) {
      std::size_t j = i;
      while (j < distinct.size() && distinct[j] == distinct[i]) ++j;
      tokens.push_back(distinct[i]);
      freq.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
    std::vector<std::uint32_t> by_rank(tokens.size());
    std::iota(by_rank.begin(), by_rank.end(), 0U);
    std::stable_sort(by_rank.begin(), by_rank.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return freq[a] < freq[b]; });
    std::vector<std::uint32_t> rank_of(tokens.size());
    for (std::uint32_t r = 0; r < by_rank.size(); ++r) rank_of[by_rank[r]] = r;

    ranked_.resize(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
      auto& out = ranked_[s];
      out.reserve(sets[s].tokens.size());
      for (auto t : sets[s].tokens) {
        const auto pos = std::lower_bound(tokens.begin(), tokens.end(), t) - tokens.begin();
        out.push_back(rank_of[static_cast<std::size_t>(pos)]);
      }
      std::sort(out.begin(), out.end());
    }

    postings_.resize(tokens.size());
    const double threshold = 1.0 - epsilon - kThresholdSlack;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const auto& r = ranked_[s];
      const std::size_t len = prefix_length(r.size(), threshold);
      for (std::size_t k = 0; k < len; ++k) postings_[r[k]].push_back(static_cast<ObjectId>(s));
    }
    // Sort each list by set size so the length filter becomes a range.
    for (auto& list : postings_) {
      std::stable_sort(list.begin(), list.end(),
                       [&](ObjectId a, ObjectId b) { return ranked_[a].size() < ranked_[b].size(); });
    }
  }

 protected:
  void collect(ObjectId p, double radius, std::vector<Neighbor>& out,
               std::uint64_t& distance_count) const override {
    const auto& probe = ranked_[p];
    const double threshold = 1.0 - radius - kThresholdSlack;
    const auto n = static_cast<ObjectId>(ranked_.size());
    if (threshold <= 0.0) {
      // Disjoint sets are within radius too; nothing can be filtered.
      for (ObjectId q = 0; q < n; ++q) verify(probe, q, radius, out, distance_count);
      return;
    }
    const double size = static_cast<double>(probe.size());
    const auto min_size = static_cast<std::size_t>(std::max(0.0, std::floor(threshold * size)));
    const auto max_size = static_cast<std::size_t>(std::ceil(size / threshold));

    std::vector<ObjectId> candidates;
    const std::size_t len = prefix_length(probe.size(), threshold);
    for (std::size_t k = 0; k < len; ++k) {
      const auto& list = postings_[probe[k]];
      auto it = std::lower_bound(list.begin(), list.end(), min_size,
                                 [&](ObjectId id, std::size_t v) { return ranked_[id].size() < v; });
      for (; it != list.end() && ranked_[*it].size() <= max_size; ++it) candidates.push_back(*it);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (ObjectId q : candidates) verify(probe, q, radius, out, distance_count);
  }

 private:
  void verify(const std::vector<std::uint32_t>& probe, ObjectId q, double radius, std::vector<Neighbor>& out,
              std::uint64_t& distance_count) const {
    const double d = jaccard_distance(probe, ranked_[q]);
    ++distance_count;
    if (d <= radius) out.push_back({q, d});
  }

  std::vector<std::vector<std::uint32_t>> ranked_;
  std::vector<std::vector<ObjectId>> postings_;
};

}  // namespace

std::unique_ptr<NeighborProvider> make_inverted_list(const Dataset& data, double epsilon) {
  return std::make_unique<InvertedListProvider>(data, epsilon);
}

}  // namespace finex::detail
