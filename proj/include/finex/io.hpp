#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "finex/finex_build.hpp"

namespace finex {

/// A dataset as read from disk plus the map from raw record (line) index to
/// the object id it was collapsed into. Vector and matrix data map 1:1.
struct LoadedData {
  Dataset data;
  std::vector<ObjectId> record_to_object;

  std::size_t record_count() const { return record_to_object.size(); }
};

enum class DataFormat : std::uint8_t { kSets, kVectors, kMatrix };

std::string_view to_string(DataFormat format);
DataFormat data_format_from_string(std::string_view name);

/// One record per line, tokens are whitespace-separated non-negative
/// integers. Identical records are collapsed into one weighted object.
LoadedData load_sets(const std::string& path);
LoadedData parse_sets(std::istream& in);

/// Comma-separated floats, one vector per line, uniform column count.
LoadedData load_vectors(const std::string& path, bool standardize, bool skip_header = false);
LoadedData parse_vectors(std::istream& in, bool standardize, bool skip_header = false);

/// Square distance matrix, one row per line, values separated by commas or
/// whitespace.
LoadedData load_matrix(const std::string& path);
LoadedData parse_matrix(std::istream& in);

struct LoadOptions {
  bool standardize = false;
  bool skip_header = false;
};

/// Dispatches on the format. Throws ContractViolation when the format does
/// not fit the metric (sets need jaccard, vectors euclidean, matrix matrix).
LoadedData load_dataset(const std::string& path, DataFormat format, MetricKind metric, const LoadOptions& options = {});

// FNX1 index files.

inline constexpr std::uint32_t kIndexFormatVersion = 1;

std::vector<std::uint8_t> serialize_index(const FinexIndex& index);
FinexIndex deserialize_index(const std::vector<std::uint8_t>& bytes);

void save_index(const std::string& path, const FinexIndex& index);

enum class FingerprintCheck : std::uint8_t { kStrict, kWarn };

/// Reads an index file. When `data` is given, metric and size must match and
/// the fingerprint is checked per `check`; in warn mode a mismatch is
/// reported on `warnings` (if non-null) instead of thrown, and the returned
/// index carries the dataset's fingerprint.
FinexIndex load_index(const std::string& path, const Dataset* data = nullptr,
                      FingerprintCheck check = FingerprintCheck::kStrict, std::ostream* warnings = nullptr);

/// CSV `object_id,cluster_id,is_core`, one row per raw record, noise as -1.
void write_labeling(std::ostream& out, const Labeling& labeling, const std::vector<ObjectId>& record_to_object);
void write_labeling(const std::string& path, const Labeling& labeling, const std::vector<ObjectId>& record_to_object);

}  // namespace finex
