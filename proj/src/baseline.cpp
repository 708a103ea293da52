#include "finex/baseline.hpp"

#include <algorithm>
#include <deque>

#include "finex/priority_queue.hpp"

namespace finex {

Labeling dbscan_exact(const NeighborProvider& provider, double epsilon, std::uint64_t min_pts,
                      const BuildOptions& options, std::uint64_t* distance_count) {
  GeneratingParams{epsilon, min_pts}.validate();
  constexpr ClusterId kUnvisited = -2;
  const std::size_t n = provider.size();
  Labeling out;
  out.cluster.assign(n, kUnvisited);
  out.core.assign(n, false);

  std::deque<ObjectId> frontier;
  for (ObjectId seed : outer_loop_order(n, options)) {
    if (out.cluster[seed] != kUnvisited) continue;
    const auto hood = provider.range_query(seed, epsilon, distance_count);
    if (hood.size < min_pts) {
      out.cluster[seed] = kNoise;  // may become a border later
      continue;
    }
    const ClusterId id = out.num_clusters++;
    out.cluster[seed] = id;
    out.core[seed] = true;
    for (const auto& nb : hood.entries) frontier.push_back(nb.id);
    while (!frontier.empty()) {
      const ObjectId q = frontier.front();
      frontier.pop_front();
      if (out.cluster[q] == kNoise) {
        out.cluster[q] = id;
        continue;
      }
      if (out.cluster[q] != kUnvisited) continue;
      out.cluster[q] = id;
      const auto q_hood = provider.range_query(q, epsilon, distance_count);
      if (q_hood.size >= min_pts) {
        out.core[q] = true;
        for (const auto& nb : q_hood.entries) {
          if (out.cluster[nb.id] == kUnvisited || out.cluster[nb.id] == kNoise) frontier.push_back(nb.id);
        }
      }
    }
  }
  return out;
}

ClusterOrdering optics_build(const NeighborProvider& provider, GeneratingParams params, const BuildOptions& options) {
  params.validate();
  if (params.epsilon > provider.epsilon()) throw ContractViolation("provider epsilon is smaller than the build epsilon");
  const std::size_t n = provider.size();
  const auto& data = provider.dataset();

  std::vector<char> processed(n, 0);
  std::vector<double> reach(n, kInfinity);
  std::vector<IndexEntry> entries;
  entries.reserve(n);
  StablePriorityQueue queue(n);

  auto process = [&](ObjectId o) {
    const auto hood = provider.range_query(o, params.epsilon);
    const double core = min_pts_distance(hood, data, params.min_pts);
    processed[o] = 1;
    entries.push_back({o, entries.size() + 1, core, reach[o], hood.size, o});
    if (core > params.epsilon) return;
    for (const auto& nb : hood.entries) {
      if (processed[nb.id]) continue;
      const double rdist = std::max(core, nb.distance);
      if (!queue.contains(nb.id)) {
        reach[nb.id] = rdist;
        queue.insert(nb.id, rdist);
      } else if (rdist < reach[nb.id]) {
        reach[nb.id] = rdist;
        queue.decrease(nb.id, rdist);
      }
    }
  };

  for (ObjectId o : outer_loop_order(n, options)) {
    if (processed[o]) continue;
    reach[o] = kInfinity;
    process(o);
    while (!queue.empty()) process(queue.pop());
  }
  return ClusterOrdering(std::move(entries), params, Flavor::kOptics);
}

bool exact_equivalent(const Labeling& candidate, const Labeling& reference, const NeighborProvider& provider,
                      double epsilon, std::string* reason) {
  auto fail = [reason](std::string why) {
    if (reason) *reason = std::move(why);
    return false;
  };
  const std::size_t n = reference.size();
  if (candidate.size() != n) return fail("labelings cover different object sets");
  if (candidate.num_clusters != reference.num_clusters) {
    return fail("cluster count " + std::to_string(candidate.num_clusters) + " vs " +
                std::to_string(reference.num_clusters));
  }
  // Cluster ids may be numbered differently; map them through the cores.
  std::vector<ClusterId> to_ref(static_cast<std::size_t>(candidate.num_clusters), kNoise);
  std::vector<ClusterId> to_cand(static_cast<std::size_t>(reference.num_clusters), kNoise);
  for (std::size_t i = 0; i < n; ++i) {
    const auto o = std::to_string(i);
    if ((candidate.cluster[i] == kNoise) != (reference.cluster[i] == kNoise)) return fail("noise differs at object " + o);
    if (candidate.core[i] != reference.core[i]) return fail("core flag differs at object " + o);
    if (!reference.core[i]) continue;
    const auto c = static_cast<std::size_t>(candidate.cluster[i]);
    const auto r = static_cast<std::size_t>(reference.cluster[i]);
    if (to_ref[c] == kNoise && to_cand[r] == kNoise) {
      to_ref[c] = reference.cluster[i];
      to_cand[r] = candidate.cluster[i];
    } else if (to_ref[c] != reference.cluster[i] || to_cand[r] != candidate.cluster[i]) {
      return fail("core partition differs at object " + o);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (candidate.cluster[i] == kNoise || candidate.core[i]) continue;
    const auto hood = provider.range_query(static_cast<ObjectId>(i), epsilon);
    const bool attached = std::any_of(hood.entries.begin(), hood.entries.end(), [&](const Neighbor& nb) {
      return candidate.core[nb.id] && candidate.cluster[nb.id] == candidate.cluster[i];
    });
    if (!attached) return fail("border " + std::to_string(i) + " has no core of its cluster within epsilon");
  }
  return true;
}

}  // namespace finex
