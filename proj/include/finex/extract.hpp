#pragma once

#include <cstddef>
#include <vector>

#include "finex/ordering.hpp"

namespace finex {

/// One approximate cluster: a contiguous run of ordering indices
/// [first, last] (0-based, inclusive) opened by a core object.
struct Segment {
  std::size_t first;
  std::size_t last;
};

struct ScanResult {
  Labeling labeling;
  std::vector<Segment> segments;  // segments[c] holds cluster id c
};

/// Linear-time threshold extraction over a cluster ordering of either
/// flavor. A run starts at an object with R > eps* and C <= eps* and
/// absorbs every following object with R <= eps*. Objects with R > eps*
/// and C > eps* are noise. No distance is evaluated.
ScanResult query_clustering(const ClusterOrdering& ordering, double epsilon_star);

/// Fraction of the exact labeling's border objects (clustered, non-core)
/// that `approx` places in some cluster. 1.0 when there are no borders.
double border_recall(const Labeling& approx, const Labeling& exact);

}  // namespace finex
