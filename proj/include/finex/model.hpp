#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace finex {

using ObjectId = std::uint32_t;
using ClusterId = std::int64_t;

inline constexpr ClusterId kNoise = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Malformed or inconsistent input data (files, matrices, token sets).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query or build parameter outside the admissible range.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MetricKind : std::uint8_t {
  kJaccard = 1,
  kEuclidean = 2,
  kExplicitMatrix = 3,
};

std::string_view to_string(MetricKind kind);
MetricKind metric_from_string(std::string_view name);

/// Deduplicated set of tokens. `tokens` is strictly increasing and non-empty;
/// `count` is the number of identical raw records it stands for.
struct TokenSet {
  std::vector<std::uint32_t> tokens;
  std::uint64_t count = 1;

  friend bool operator==(const TokenSet&, const TokenSet&) = default;
};

struct GeneratingParams {
  double epsilon = 0.0;
  std::uint64_t min_pts = 1;

  /// Throws ContractViolation unless epsilon >= 0 (and finite) and min_pts >= 1.
  void validate() const;
};

using Fingerprint = std::array<std::uint8_t, 32>;

std::string to_hex(const Fingerprint& fp);

// Distance primitives. Every neighborhood backend and every oracle goes
// through these so that identical pairs yield bit-identical doubles.

double jaccard_from_counts(std::size_t intersection, std::size_t union_size);
double jaccard_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Immutable clusterable dataset together with the metric it is measured in.
/// Set data carries duplicate counts; vectors and matrix rows have weight 1.
class Dataset {
 public:
  static Dataset from_sets(std::vector<TokenSet> sets);
  /// Row-major coordinates, `coords.size()` must be a multiple of `dim`.
  static Dataset from_vectors(std::size_t dim, std::vector<double> coords);
  /// Square distance matrix, row-major. Must be symmetric, zero on the
  /// diagonal, finite and non-negative.
  static Dataset from_matrix(std::size_t n, std::vector<double> matrix);

  MetricKind metric() const { return metric_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::uint64_t weight(ObjectId id) const {
    return metric_ == MetricKind::kJaccard ? sets_[id].count : 1;
  }
  std::uint64_t total_weight() const;

  double distance(ObjectId a, ObjectId b) const;

  const std::vector<TokenSet>& sets() const { return sets_; }
  std::size_t dimension() const { return dim_; }
  std::span<const double> vector(ObjectId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& matrix() const { return matrix_; }

  /// SHA-256 over a canonical serialization of the (deduplicated) content.
  const Fingerprint& fingerprint() const { return fingerprint_; }

 private:
  Dataset() = default;
  void compute_fingerprint();

  MetricKind metric_ = MetricKind::kEuclidean;
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::vector<TokenSet> sets_;
  std::vector<double> coords_;
  std::vector<double> matrix_;
  Fingerprint fingerprint_{};
};

struct DeduplicatedSets {
  std::vector<TokenSet> sets;
  /// raw record index -> deduplicated ObjectId
  std::vector<ObjectId> record_to_object;
};

/// Sorts and uniques every record, then collapses identical sets. Distinct
/// sets are numbered in order of first occurrence. Throws DataError (naming
/// the record index) on an empty record.
DeduplicatedSets deduplicate(const std::vector<std::vector<std::uint32_t>>& records);

/// Per-dimension zero mean, unit population variance. Constant dimensions
/// become all zeros. `coords` is row-major with `dim` columns.
std::vector<double> standardize(std::size_t dim, std::span<const double> coords);

/// Per-object cluster assignment with core flags.
struct Labeling {
  std::vector<ClusterId> cluster;
  std::vector<bool> core;
  ClusterId num_clusters = 0;

  std::size_t size() const { return cluster.size(); }
  std::size_t noise_count() const;
  /// Checks the structural invariants (ids dense, each cluster has a core,
  /// noise is never core). Throws std::logic_error when broken.
  void check_invariants() const;
};

namespace fixture {

/// Eleven objects A..K (ids 0..10) whose pairwise distances are the
/// neighborhoods of six core objects in a small two-cluster layout,
/// normalized to epsilon = 1. Pairs not listed are 2.0 apart.
Dataset sample_dataset();
inline constexpr GeneratingParams kSampleParams{1.0, 4};
ObjectId sample_id(char name);
char sample_name(ObjectId id);

}  // namespace fixture

}  // namespace finex
