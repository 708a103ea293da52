#pragma once

// Test-only reference implementations. Nothing here calls the library's
// neighborhood, ordering or query code; only the raw dataset content is
// shared.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finex/model.hpp"

namespace oracle {

using finex::ClusterId;
using finex::Dataset;
using finex::Labeling;
using finex::ObjectId;

/// All pairwise distances, computed once with textbook formulas.
class Distances {
 public:
  explicit Distances(const Dataset& data);

  std::size_t size() const { return n_; }
  double operator()(ObjectId a, ObjectId b) const { return d_[a * n_ + b]; }
  std::uint64_t weight(ObjectId a) const { return w_[a]; }

  std::vector<ObjectId> hood(ObjectId p, double radius) const;
  std::uint64_t hood_weight(ObjectId p, double radius) const;
  /// Smallest r with weighted |N_r(p)| >= min_pts, if r <= radius; else inf.
  double core_distance(ObjectId p, double radius, std::uint64_t min_pts) const;

 private:
  std::size_t n_;
  std::vector<double> d_;
  std::vector<std::uint64_t> w_;
};

/// Textbook DBSCAN: cores by weighted count, core components by union-find,
/// each border attached to the component of its smallest-id core neighbor.
Labeling dbscan(const Distances& d, double epsilon, std::uint64_t min_pts);

/// The exact-equivalence relation between `candidate` and the clustering at
/// (epsilon, min_pts): same noise, same cores and core partition, every
/// border next to a core of its own cluster. Returns an explanation or
/// nullopt when equivalent.
std::optional<std::string> inequivalence(const Labeling& candidate, const Distances& d, double epsilon,
                                         std::uint64_t min_pts);

/// Border objects (clustered, non-core) of a reference labeling.
std::vector<ObjectId> borders(const Labeling& exact);

}  // namespace oracle

namespace gen {

/// Gaussian blobs plus uniform background noise in [0, extent]^dim.
finex::Dataset blobs(std::uint64_t seed, std::size_t n, std::size_t dim, std::size_t centers, double spread,
                     double extent, double noise_fraction);
/// Integer lattice points with random multiplicities, producing many exact
/// distance ties at integer radii.
finex::Dataset grid(std::uint64_t seed, std::size_t n, std::size_t side);
/// Token sets built by perturbing a few prototypes, with exact duplicates.
finex::Dataset sets(std::uint64_t seed, std::size_t records, std::size_t prototypes, std::size_t vocabulary);
/// Uniform random vectors in the unit cube.
finex::Dataset uniform(std::uint64_t seed, std::size_t n, std::size_t dim);

}  // namespace gen

namespace harness {

/// One randomized instance with its generating pair and query grid.
struct Instance {
  std::string name;
  finex::Dataset data;
  finex::GeneratingParams params;
  std::vector<double> epsilon_stars;       // all <= epsilon, includes epsilon
  std::vector<std::uint64_t> min_pts_stars;  // all >= min_pts, includes min_pts
};

/// `count` instances cycling through set, 2-d, 5-d and tie-heavy data.
std::vector<Instance> instances(std::size_t count, std::uint64_t seed = 20240601);

}  // namespace harness
