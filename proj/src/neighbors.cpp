#include "finex/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "backends.hpp"

namespace finex {

bool Neighborhood::contains(ObjectId id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), id,
                             [](const Neighbor& n, ObjectId v) { return n.id < v; });
  return it != entries.end() && it->id == id;
}

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::kBruteForce:
      return "brute";
    case Backend::kSetInvertedList:
      return "inverted";
    case Backend::kKdTree:
      return "kdtree";
    case Backend::kExplicitMatrix:
      return "matrix";
  }
  return "unknown";
}

Backend backend_from_string(std::string_view name) {
  if (name == "brute") return Backend::kBruteForce;
  if (name == "inverted") return Backend::kSetInvertedList;
  if (name == "kdtree") return Backend::kKdTree;
  if (name == "matrix") return Backend::kExplicitMatrix;
  throw ContractViolation("unknown backend '" + std::string(name) + "'");
}

Backend default_backend(MetricKind metric) {
  switch (metric) {
    case MetricKind::kJaccard:
      return Backend::kSetInvertedList;
    case MetricKind::kEuclidean:
      return Backend::kKdTree;
    case MetricKind::kExplicitMatrix:
      return Backend::kExplicitMatrix;
  }
  return Backend::kBruteForce;
}

NeighborProvider::NeighborProvider(const Dataset& data, double epsilon, Backend backend)
    : data_(data), epsilon_(epsilon), backend_(backend) {}

Neighborhood NeighborProvider::range_query(ObjectId p, double radius, std::uint64_t* distance_count) const {
  if (p >= data_.size()) throw std::out_of_range("range query for unknown object");
  if (!(radius >= 0.0) || radius > epsilon_) {
    throw ContractViolation("range query radius " + std::to_string(radius) +
                            " exceeds the provider epsilon " + std::to_string(epsilon_));
  }
  Neighborhood hood;
  std::uint64_t count = 0;
  collect(p, radius, hood.entries, count);
  if (distance_count) *distance_count += count;
  std::sort(hood.entries.begin(), hood.entries.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  for (const auto& n : hood.entries) hood.size += data_.weight(n.id);
  return hood;
}

namespace {

class BruteForceProvider final : public NeighborProvider {
 public:
  BruteForceProvider(const Dataset& data, double epsilon)
      : NeighborProvider(data, epsilon, Backend::kBruteForce) {}

 protected:
  void collect(ObjectId p, double radius, std::vector<Neighbor>& out,
               std::uint64_t& distance_count) const override {
    const auto n = static_cast<ObjectId>(dataset().size());
    for (ObjectId q = 0; q < n; ++q) {
      const double d = dataset().distance(p, q);
      if (d <= radius) out.push_back({q, d});
    }
    distance_count += n;
  }
};

class MatrixProvider final : public NeighborProvider {
 public:
  MatrixProvider(const Dataset& data, double epsilon)
      : NeighborProvider(data, epsilon, Backend::kExplicitMatrix) {}

 protected:
  void collect(ObjectId p, double radius, std::vector<Neighbor>& out,
               std::uint64_t& distance_count) const override {
    const std::size_t n = dataset().size();
    const double* row = dataset().matrix().data() + static_cast<std::size_t>(p) * n;
    for (std::size_t q = 0; q < n; ++q) {
      if (row[q] <= radius) out.push_back({static_cast<ObjectId>(q), row[q]});
    }
    distance_count += n;
  }
};

class MaterializedProvider final : public NeighborProvider {
 public:
  explicit MaterializedProvider(std::unique_ptr<NeighborProvider> inner)
      : NeighborProvider(inner->dataset(), inner->epsilon(), inner->backend()), inner_(std::move(inner)) {
    const auto n = static_cast<ObjectId>(dataset().size());
    hoods_.reserve(n);
    for (ObjectId p = 0; p < n; ++p) {
      hoods_.push_back(inner_->range_query(p, epsilon(), &build_count_).entries);
    }
  }

  std::uint64_t setup_distance_computations() const override { return build_count_; }

 protected:
  void collect(ObjectId p, double radius, std::vector<Neighbor>& out, std::uint64_t&) const override {
    const auto& hood = hoods_[p];
    if (radius >= epsilon()) {
      out = hood;
      return;
    }
    for (const auto& n : hood) {
      if (n.distance <= radius) out.push_back(n);
    }
  }

 private:
  std::unique_ptr<NeighborProvider> inner_;
  std::vector<std::vector<Neighbor>> hoods_;
  std::uint64_t build_count_ = 0;
};

}  // namespace

std::unique_ptr<NeighborProvider> build_provider(const Dataset& data, double epsilon, Backend backend) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("provider epsilon must be a finite non-negative number");
  }
  if (data.empty()) throw DataError("cannot build a neighborhood provider over an empty dataset");
  const auto metric = data.metric();
  switch (backend) {
    case Backend::kBruteForce:
      return std::make_unique<BruteForceProvider>(data, epsilon);
    case Backend::kSetInvertedList:
      if (metric != MetricKind::kJaccard) break;
      return detail::make_inverted_list(data, epsilon);
    case Backend::kKdTree:
      if (metric != MetricKind::kEuclidean) break;
      return detail::make_kd_tree(data, epsilon);
    case Backend::kExplicitMatrix:
      if (metric != MetricKind::kExplicitMatrix) break;
      return std::make_unique<MatrixProvider>(data, epsilon);
  }
  throw ContractViolation("backend '" + std::string(to_string(backend)) + "' cannot serve " +
                          std::string(to_string(metric)) + " data");
}

std::unique_ptr<NeighborProvider> materialize(std::unique_ptr<NeighborProvider> inner) {
  return std::make_unique<MaterializedProvider>(std::move(inner));
}

double min_pts_distance(const Neighborhood& hood, const Dataset& data, std::uint64_t min_pts) {
  if (min_pts < 1) throw ContractViolation("min_pts must be at least 1");
  if (hood.size < min_pts) return kInfinity;
  std::vector<std::pair<double, ObjectId>> by_distance;
  by_distance.reserve(hood.entries.size());
  for (const auto& n : hood.entries) by_distance.emplace_back(n.distance, n.id);
  std::sort(by_distance.begin(), by_distance.end());
  std::uint64_t running = 0;
  for (const auto& [d, id] : by_distance) {
    running += data.weight(id);
    if (running >= min_pts) return d;
  }
  return kInfinity;
}

double min_pts_distance(const NeighborProvider& provider, ObjectId p, std::uint64_t min_pts) {
  return min_pts_distance(provider.range_query(p, provider.epsilon()), provider.dataset(), min_pts);
}

double core_distance(const NeighborProvider& provider, ObjectId p, double epsilon, std::uint64_t min_pts) {
  // M(p) <= epsilon exactly when |N_epsilon(p)| >= min_pts.
  return min_pts_distance(provider.range_query(p, epsilon), provider.dataset(), min_pts);
}

double reachability_distance(const NeighborProvider& provider, ObjectId q, ObjectId p, double epsilon,
                             std::uint64_t min_pts) {
  const double core = core_distance(provider, p, epsilon, min_pts);
  if (core == kInfinity) return kInfinity;
  return std::max(core, provider.distance(p, q));
}

}  // namespace finex
