#pragma once

#include <cstdint>
#include <vector>

#include "finex/extract.hpp"
#include "finex/finex_build.hpp"
#include "finex/neighbors.hpp"

namespace finex {

struct QueryStats {
  std::uint64_t distance_computations = 0;
  std::uint64_t range_queries = 0;
  std::uint64_t candidates = 0;        // former-cores considered
  std::uint64_t candidates_added = 0;  // former-cores verified into a cluster
  double millis = 0.0;
};

/// Former-core candidates of one approximate cluster.
struct Candidate {
  ObjectId object;
  std::size_t index;          // 0-based ordering index
  ClusterId enclosing;        // epsilon-level cluster id
};

/// Per ordering index, the epsilon-level exact cluster id (or kNoise),
/// read off a single threshold scan at the generating epsilon.
std::vector<ClusterId> enclosing_cluster_map(const ClusterOrdering& ordering);

/// Noise-labeled objects of `scan` with eps* < C <= eps, in ascending
/// ordering index.
std::vector<Candidate> collect_candidates(const ClusterOrdering& ordering, const ScanResult& scan,
                                          const std::vector<ClusterId>& enclosing, double epsilon_star);

/// Exact DBSCAN clustering at (eps*, MinPts) derived from the index.
Labeling epsilon_star_query(const FinexIndex& index, const NeighborProvider& provider, double epsilon_star,
                            QueryStats* stats = nullptr);

/// Exact DBSCAN clustering at (eps, MinPts*) derived from the index.
Labeling minpts_star_query(const FinexIndex& index, const NeighborProvider& provider, std::uint64_t min_pts_star,
                           QueryStats* stats = nullptr);

/// Connected components of `cores` under the relation d <= epsilon, found by
/// expanding neighborhoods restricted to the not-yet-assigned cores.
/// Components are listed in order of their first member in `cores`.
std::vector<std::vector<ObjectId>> compute_core_clustering(const std::vector<ObjectId>& cores,
                                                           const NeighborProvider& provider, double epsilon,
                                                           QueryStats* stats = nullptr);

}  // namespace finex
