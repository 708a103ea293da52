#include "finex/model.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

namespace finex {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kJaccard:
      return "jaccard";
    case MetricKind::kEuclidean:
      return "euclidean";
    case MetricKind::kExplicitMatrix:
      return "matrix";
  }
  return "unknown";
}

MetricKind metric_from_string(std::string_view name) {
  if (name == "jaccard") return MetricKind::kJaccard;
  if (name == "euclidean") return MetricKind::kEuclidean;
  if (name == "matrix") return MetricKind::kExplicitMatrix;
  throw ContractViolation("unknown metric '" + std::string(name) + "'");
}

void GeneratingParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("epsilon must be a finite non-negative number");
  }
  if (min_pts < 1) throw ContractViolation("min_pts must be at least 1");
}

std::string to_hex(const Fingerprint& fp) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(fp.size() * 2);
  for (auto byte : fp) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

double jaccard_from_counts(std::size_t intersection, std::size_t union_size) {
  return 1.0 - static_cast<double>(intersection) / static_cast<double>(union_size);
}

double jaccard_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return jaccard_from_counts(common, a.size() + b.size() - common);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

Dataset Dataset::from_sets(std::vector<TokenSet> sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& s = sets[i];
    if (s.tokens.empty()) throw DataError("set " + std::to_string(i) + " is empty");
    if (s.count == 0) throw DataError("set " + std::to_string(i) + " has zero count");
    if (std::adjacent_find(s.tokens.begin(), s.tokens.end(),
                           [](auto x, auto y) { return x >= y; }) != s.tokens.end()) {
      throw DataError("set " + std::to_string(i) + " is not strictly increasing");
    }
  }
  Dataset d;
  d.metric_ = MetricKind::kJaccard;
  d.size_ = sets.size();
  d.sets_ = std::move(sets);
  d.compute_fingerprint();
  return d;
}

Dataset Dataset::from_vectors(std::size_t dim, std::vector<double> coords) {
  if (dim == 0) throw DataError("vector dimension must be positive");
  if (coords.size() % dim != 0) throw DataError("coordinate count is not a multiple of the dimension");
  for (double c : coords) {
    if (!std::isfinite(c)) throw DataError("non-finite coordinate");
  }
  Dataset d;
  d.metric_ = MetricKind::kEuclidean;
  d.dim_ = dim;
  d.size_ = coords.size() / dim;
  d.coords_ = std::move(coords);
  d.compute_fingerprint();
  return d;
}

Dataset Dataset::from_matrix(std::size_t n, std::vector<double> matrix) {
  if (matrix.size() != n * n) throw DataError("distance matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0) {
      throw DataError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i * n + j];
      if (!std::isfinite(v) || v < 0.0) {
        throw DataError("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is negative or not finite");
      }
      if (v != matrix[j * n + i]) {
        throw DataError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
  Dataset d;
  d.metric_ = MetricKind::kExplicitMatrix;
  d.size_ = n;
  d.matrix_ = std::move(matrix);
  d.compute_fingerprint();
  return d;
}

std::uint64_t Dataset::total_weight() const {
  if (metric_ != MetricKind::kJaccard) return size_;
  std::uint64_t total = 0;
  for (const auto& s : sets_) total += s.count;
  return total;
}

double Dataset::distance(ObjectId a, ObjectId b) const {
  if (a >= size_ || b >= size_) throw std::out_of_range("object id out of range");
  switch (metric_) {
    case MetricKind::kJaccard:
      return jaccard_distance(sets_[a].tokens, sets_[b].tokens);
    case MetricKind::kEuclidean:
      return euclidean_distance(vector(a), vector(b));
    case MetricKind::kExplicitMatrix:
      return matrix_[static_cast<std::size_t>(a) * size_ + b];
  }
  return kInfinity;
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }

  void u64(std::uint64_t v) {
    std::array<std::uint8_t, 8> bytes{};
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<std::uint8_t>(v >> (8 * k));
    EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size());
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  Fingerprint finish() {
    Fingerprint out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), out.data(), &len);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

void Dataset::compute_fingerprint() {
  Sha256 h;
  h.u64(static_cast<std::uint64_t>(metric_));
  h.u64(size_);
  switch (metric_) {
    case MetricKind::kJaccard:
      for (const auto& s : sets_) {
        h.u64(s.count);
        h.u64(s.tokens.size());
        for (auto t : s.tokens) h.u64(t);
      }
      break;
    case MetricKind::kEuclidean:
      h.u64(dim_);
      for (double c : coords_) h.f64(c);
      break;
    case MetricKind::kExplicitMatrix:
      for (double v : matrix_) h.f64(v);
      break;
  }
  fingerprint_ = h.finish();
}

DeduplicatedSets deduplicate(const std::vector<std::vector<std::uint32_t>>& records) {
  DeduplicatedSets out;
  out.record_to_object.reserve(records.size());
  std::map<std::vector<std::uint32_t>, ObjectId> seen;
  for (std::size_t r = 0; r < records.size(); ++r) {
    std::vector<std::uint32_t> tokens = records[r];
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    if (tokens.empty()) throw DataError("record " + std::to_string(r) + " is empty");
    auto [it, inserted] = seen.try_emplace(std::move(tokens), static_cast<ObjectId>(out.sets.size()));
    if (inserted) {
      out.sets.push_back(TokenSet{it->first, 1});
    } else {
      ++out.sets[it->second].count;
    }
    out.record_to_object.push_back(it->second);
  }
  return out;
}

std::vector<double> standardize(std::size_t dim, std::span<const double> coords) {
  if (dim == 0 || coords.empty()) throw DataError("cannot standardize an empty collection");
  if (coords.size() % dim != 0) throw DataError("ragged vectors");
  const std::size_t n = coords.size() / dim;
  std::vector<double> out(coords.begin(), coords.end());
  for (std::size_t k = 0; k < dim; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += coords[i * dim + k];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = coords[i * dim + k] - mean;
      var += c * c;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) {
      out[i * dim + k] = sd > 0.0 ? (coords[i * dim + k] - mean) / sd : 0.0;
    }
  }
  return out;
}

std::size_t Labeling::noise_count() const {
  return static_cast<std::size_t>(std::count(cluster.begin(), cluster.end(), kNoise));
}

void Labeling::check_invariants() const {
  if (core.size() != cluster.size()) throw std::logic_error("labeling: size mismatch");
  std::vector<char> has_core(static_cast<std::size_t>(num_clusters), 0);
  std::vector<char> used(static_cast<std::size_t>(num_clusters), 0);
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const ClusterId c = cluster[i];
    if (c == kNoise) {
      if (core[i]) throw std::logic_error("labeling: noise object flagged core");
      continue;
    }
    if (c < 0 || c >= num_clusters) throw std::logic_error("labeling: cluster id out of range");
    used[c] = 1;
    if (core[i]) has_core[c] = 1;
  }
  for (ClusterId c = 0; c < num_clusters; ++c) {
    if (!used[c]) throw std::logic_error("labeling: empty cluster id " + std::to_string(c));
    if (!has_core[c]) throw std::logic_error("labeling: cluster without core " + std::to_string(c));
  }
}

}  // namespace finex
