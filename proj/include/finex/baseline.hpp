#pragma once

#include <string>

#include "finex/neighbors.hpp"
#include "finex/ordering.hpp"

namespace finex {

/// Reference DBSCAN. Objects are scanned in outer-loop order; ambiguous
/// border objects go to the first cluster that reaches them.
Labeling dbscan_exact(const NeighborProvider& provider, double epsilon, std::uint64_t min_pts,
                      const BuildOptions& options = {}, std::uint64_t* distance_count = nullptr);

/// Reference OPTICS ordering. Every object is processed exactly once; N is
/// recorded and F is left as a self reference.
ClusterOrdering optics_build(const NeighborProvider& provider, GeneratingParams params,
                             const BuildOptions& options = {});

/// Whether `candidate` is an exact clustering at (epsilon, min_pts) that
/// differs from `reference` only in the placement of ambiguous borders:
/// same noise, same core flags, same partition of the cores, and every
/// clustered non-core within epsilon of a core of its own cluster. On
/// failure `reason` (if given) describes the first difference.
bool exact_equivalent(const Labeling& candidate, const Labeling& reference, const NeighborProvider& provider,
                      double epsilon, std::string* reason = nullptr);

}  // namespace finex
