#include "finex/extract.hpp"

#include <cmath>
#include <string>

namespace finex {

ScanResult query_clustering(const ClusterOrdering& ordering, double epsilon_star) {
  if (!(epsilon_star >= 0.0) || epsilon_star > ordering.params().epsilon) {
    throw ContractViolation("epsilon* " + std::to_string(epsilon_star) + " outside [0, " +
                            std::to_string(ordering.params().epsilon) + "]");
  }
  const std::size_t n = ordering.size();
  ScanResult out;
  auto& labels = out.labeling;
  labels.cluster.assign(n, kNoise);
  labels.core.assign(n, false);

  bool open = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = ordering[i];
    if (x.reach > epsilon_star) {
      if (x.core <= epsilon_star) {
        out.segments.push_back({i, i});
        open = true;
        labels.cluster[x.object] = labels.num_clusters++;
      }
      // else: noise; the current run is not closed by a noise object
    } else {
      labels.cluster[x.object] = open ? labels.num_clusters - 1 : labels.num_clusters++;
      if (!open) {
        out.segments.push_back({i, i});
        open = true;
      }
      out.segments.back().last = i;
    }
    labels.core[x.object] = x.core <= epsilon_star;
  }
  return out;
}

double border_recall(const Labeling& approx, const Labeling& exact) {
  if (approx.size() != exact.size()) throw std::invalid_argument("labelings cover different object sets");
  std::size_t borders = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (exact.cluster[i] == kNoise || exact.core[i]) continue;
    ++borders;
    if (approx.cluster[i] != kNoise) ++hits;
  }
  return borders == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(borders);
}

}  // namespace finex
