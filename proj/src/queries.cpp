#include "finex/queries.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <string>

namespace finex {
namespace {

std::string pair_text(const GeneratingParams& p) {
  return "(epsilon=" + std::to_string(p.epsilon) + ", minpts=" + std::to_string(p.min_pts) + ")";
}

void check_provider(const FinexIndex& index, const NeighborProvider& provider) {
  index.check_dataset(provider.dataset());
  if (provider.epsilon() < index.params().epsilon) {
    throw ContractViolation("neighbor provider radius is smaller than the index epsilon");
  }
}

class Timer {
 public:
  explicit Timer(QueryStats* stats) : stats_(stats), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    if (stats_) {
      stats_->millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }
  }

 private:
  QueryStats* stats_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::vector<ClusterId> enclosing_cluster_map(const ClusterOrdering& ordering) {
  const auto scan = query_clustering(ordering, ordering.params().epsilon);
  std::vector<ClusterId> out(ordering.size());
  for (std::size_t i = 0; i < ordering.size(); ++i) out[i] = scan.labeling.cluster[ordering[i].object];
  return out;
}

std::vector<Candidate> collect_candidates(const ClusterOrdering& ordering, const ScanResult& scan,
                                          const std::vector<ClusterId>& enclosing, double epsilon_star) {
  const double eps = ordering.params().epsilon;
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    const auto& e = ordering[i];
    if (scan.labeling.cluster[e.object] != kNoise) continue;
    if (e.core > epsilon_star && e.core <= eps) out.push_back({e.object, i, enclosing[i]});
  }
  return out;
}

Labeling epsilon_star_query(const FinexIndex& index, const NeighborProvider& provider, double epsilon_star,
                            QueryStats* stats) {
  Timer timer(stats);
  const auto& ordering = index.ordering();
  if (!(epsilon_star >= 0.0) || epsilon_star > index.params().epsilon) {
    throw ContractViolation("epsilon* " + std::to_string(epsilon_star) + " is not admissible for generating pair " +
                            pair_text(index.params()));
  }
  check_provider(index, provider);

  auto scan = query_clustering(ordering, epsilon_star);
  const auto enclosing = enclosing_cluster_map(ordering);
  const auto candidates = collect_candidates(ordering, scan, enclosing, epsilon_star);

  // Cores of every approximate cluster, in ordering sequence.
  std::vector<std::vector<ObjectId>> seg_cores(scan.segments.size());
  for (std::size_t s = 0; s < scan.segments.size(); ++s) {
    for (std::size_t i = scan.segments[s].first; i <= scan.segments[s].last; ++i) {
      const auto& e = ordering[i];
      if (e.core <= epsilon_star && scan.labeling.cluster[e.object] == static_cast<ClusterId>(s)) {
        seg_cores[s].push_back(e.object);
      }
    }
  }

  std::uint64_t distances = 0;
  std::uint64_t added = 0;
  auto& labels = scan.labeling;
  for (const auto& cand : candidates) {
    // Segments are sorted by first index; only those starting after the
    // candidate are eligible.
    auto it = std::upper_bound(scan.segments.begin(), scan.segments.end(), cand.index,
                               [](std::size_t idx, const Segment& s) { return idx < s.first; });
    bool placed = false;
    for (; it != scan.segments.end() && !placed; ++it) {
      if (enclosing[it->first] != cand.enclosing) continue;
      const auto s = static_cast<std::size_t>(it - scan.segments.begin());
      for (ObjectId c : seg_cores[s]) {
        if (provider.distance(cand.object, c, &distances) <= epsilon_star) {
          labels.cluster[cand.object] = static_cast<ClusterId>(s);
          placed = true;
          ++added;
          break;
        }
      }
    }
  }

  if (stats) {
    stats->distance_computations = distances;
    stats->range_queries = 0;
    stats->candidates = candidates.size();
    stats->candidates_added = added;
  }
  return std::move(scan.labeling);
}

std::vector<std::vector<ObjectId>> compute_core_clustering(const std::vector<ObjectId>& cores,
                                                           const NeighborProvider& provider, double epsilon,
                                                           QueryStats* stats) {
  std::vector<char> remaining(provider.size(), 0);
  for (ObjectId c : cores) remaining[c] = 1;

  std::uint64_t distances = 0;
  std::uint64_t range_queries = 0;
  std::vector<std::vector<ObjectId>> components;
  std::deque<ObjectId> frontier;
  for (ObjectId seed : cores) {
    if (!remaining[seed]) continue;
    remaining[seed] = 0;
    std::vector<ObjectId> component{seed};
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const ObjectId x = frontier.front();
      frontier.pop_front();
      const auto hood = provider.range_query(x, epsilon, &distances);
      ++range_queries;
      for (const auto& nb : hood.entries) {
        if (!remaining[nb.id]) continue;
        remaining[nb.id] = 0;
        component.push_back(nb.id);
        frontier.push_back(nb.id);
      }
    }
    components.push_back(std::move(component));
  }
  if (stats) {
    stats->distance_computations += distances;
    stats->range_queries += range_queries;
  }
  return components;
}

Labeling minpts_star_query(const FinexIndex& index, const NeighborProvider& provider, std::uint64_t min_pts_star,
                           QueryStats* stats) {
  Timer timer(stats);
  const auto& ordering = index.ordering();
  const auto& params = index.params();
  if (min_pts_star < params.min_pts) {
    throw ContractViolation("minpts* " + std::to_string(min_pts_star) + " is not admissible for generating pair " +
                            pair_text(params));
  }
  check_provider(index, provider);
  if (stats) *stats = {};

  // Step 1: exact sparse clustering; its noise stays noise.
  auto sparse = query_clustering(ordering, params.epsilon);
  if (min_pts_star == params.min_pts) return std::move(sparse.labeling);

  const std::size_t n = ordering.size();
  Labeling out;
  out.cluster.assign(n, kNoise);
  out.core.assign(n, false);

  // Step 2: dense core components inside every sparse cluster.
  for (const auto& seg : sparse.segments) {
    const ClusterId sparse_id = sparse.labeling.cluster[ordering[seg.first].object];
    std::vector<ObjectId> cores;
    bool demoted = false;
    for (std::size_t i = seg.first; i <= seg.last; ++i) {
      const auto& e = ordering[i];
      if (sparse.labeling.cluster[e.object] != sparse_id) continue;
      if (e.hood_size >= min_pts_star) {
        cores.push_back(e.object);
      } else if (e.hood_size >= params.min_pts) {
        demoted = true;
      }
    }
    if (cores.empty()) continue;
    std::vector<std::vector<ObjectId>> components;
    if (demoted) {
      components = compute_core_clustering(cores, provider, params.epsilon, stats);
    } else {
      components.push_back(std::move(cores));
    }
    for (const auto& comp : components) {
      const ClusterId id = out.num_clusters++;
      for (ObjectId c : comp) {
        out.cluster[c] = id;
        out.core[c] = true;
      }
    }
  }

  // Step 3: remaining members follow their finder reference.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = ordering[i];
    if (sparse.labeling.cluster[e.object] == kNoise || out.core[e.object]) continue;
    const auto& f = ordering.entry_of(e.finder);
    if (f.hood_size >= min_pts_star) out.cluster[e.object] = out.cluster[f.object];
  }
  return out;
}

}  // namespace finex
