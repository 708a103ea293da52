#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "finex/model.hpp"

namespace finex {

struct Neighbor {
  ObjectId id;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// N_radius(p): every object within `radius` of p, p itself included,
/// sorted by id. `size` is duplicate-weighted.
struct Neighborhood {
  std::vector<Neighbor> entries;
  std::uint64_t size = 0;

  bool contains(ObjectId id) const;
};

enum class Backend : std::uint8_t {
  kBruteForce,
  kSetInvertedList,
  kKdTree,
  kExplicitMatrix,
};

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);
Backend default_backend(MetricKind metric);

/// Epsilon-range query engine over one dataset. Providers are immutable once
/// built; `range_query` and `distance` may be called concurrently. The
/// dataset must outlive the provider.
class NeighborProvider {
 public:
  NeighborProvider(const Dataset& data, double epsilon, Backend backend);
  virtual ~NeighborProvider() = default;

  NeighborProvider(const NeighborProvider&) = delete;
  NeighborProvider& operator=(const NeighborProvider&) = delete;

  const Dataset& dataset() const { return data_; }
  double epsilon() const { return epsilon_; }
  Backend backend() const { return backend_; }
  std::size_t size() const { return data_.size(); }

  /// Exact neighborhood of p for `radius` <= epsilon(). Adds the number of
  /// distance evaluations performed to `*distance_count` when given.
  Neighborhood range_query(ObjectId p, double radius, std::uint64_t* distance_count = nullptr) const;

  double distance(ObjectId a, ObjectId b, std::uint64_t* distance_count = nullptr) const {
    if (distance_count) ++*distance_count;
    return data_.distance(a, b);
  }

  /// Distance evaluations spent before the first query (materialization).
  virtual std::uint64_t setup_distance_computations() const { return 0; }

 protected:
  /// Appends (id, distance) for every object within radius, in any order.
  virtual void collect(ObjectId p, double radius, std::vector<Neighbor>& out,
                       std::uint64_t& distance_count) const = 0;

 private:
  const Dataset& data_;
  double epsilon_;
  Backend backend_;
};

/// Throws ContractViolation for a negative epsilon or a backend that does
/// not fit the dataset metric, DataError for an empty dataset.
std::unique_ptr<NeighborProvider> build_provider(const Dataset& data, double epsilon, Backend backend);

/// Wraps `inner` and precomputes every neighborhood at inner->epsilon().
/// Queries at smaller radii post-filter the stored neighborhoods.
std::unique_ptr<NeighborProvider> materialize(std::unique_ptr<NeighborProvider> inner);

// Density primitives.

/// Smallest radius at which the weighted neighborhood reaches min_pts, taken
/// from a neighborhood computed at some radius r. Infinity if r is too small.
double min_pts_distance(const Neighborhood& hood, const Dataset& data, std::uint64_t min_pts);
double min_pts_distance(const NeighborProvider& provider, ObjectId p, std::uint64_t min_pts);
double core_distance(const NeighborProvider& provider, ObjectId p, double epsilon, std::uint64_t min_pts);
/// R(q, p): reachability of q from p.
double reachability_distance(const NeighborProvider& provider, ObjectId q, ObjectId p, double epsilon,
                             std::uint64_t min_pts);

}  // namespace finex
