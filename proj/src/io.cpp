#include "finex/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

namespace finex {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw DataError(at_line(line) + "non-numeric value '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw DataError(at_line(line) + "non-finite value '" + std::string(cell) + "'");
  return v;
}

std::vector<double> split_numbers(const std::string& text, std::size_t line, bool allow_whitespace) {
  std::vector<double> out;
  std::string_view rest(text);
  if (allow_whitespace && rest.find(',') == std::string_view::npos) {
    std::istringstream tokens(text);
    std::string tok;
    while (tokens >> tok) out.push_back(parse_cell(tok, line));
    return out;
  }
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_cell(rest.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<ObjectId> identity_map(std::size_t n) {
  std::vector<ObjectId> out(n);
  std::iota(out.begin(), out.end(), ObjectId{0});
  return out;
}

// Little-endian fixed-width encoding.
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes = 8) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t u(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  double f64() { return std::bit_cast<double>(u(8)); }
  void raw(std::uint8_t* dst, std::size_t len) {
    need(len);
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), len, dst);
    pos_ += len;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t len) const {
    if (bytes_.size() - pos_ < len) throw DataError("index file is truncated");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'F', 'N', 'X', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 8 + 8 + 8 + 32;
constexpr std::size_t kRecordBytes = 5 * 8;

}  // namespace

std::string_view to_string(DataFormat format) {
  switch (format) {
    case DataFormat::kSets:
      return "sets";
    case DataFormat::kVectors:
      return "vectors";
    case DataFormat::kMatrix:
      return "matrix";
  }
  return "?";
}

DataFormat data_format_from_string(std::string_view name) {
  if (name == "sets") return DataFormat::kSets;
  if (name == "vectors") return DataFormat::kVectors;
  if (name == "matrix") return DataFormat::kMatrix;
  throw ContractViolation("unknown data format '" + std::string(name) + "'");
}

LoadedData parse_sets(std::istream& in) {
  std::vector<std::vector<std::uint32_t>> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::vector<std::uint32_t> record;
    std::istringstream tokens(text);
    std::string tok;
    while (tokens >> tok) {
      std::uint32_t v = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw DataError(at_line(line) + "invalid token '" + tok + "'");
      }
      record.push_back(v);
    }
    if (record.empty()) throw DataError(at_line(line) + "empty record");
    records.push_back(std::move(record));
  }
  if (records.empty()) throw DataError("no records");
  auto dedup = deduplicate(records);
  return {Dataset::from_sets(std::move(dedup.sets)), std::move(dedup.record_to_object)};
}

LoadedData load_sets(const std::string& path) {
  auto in = open_input(path);
  return parse_sets(in);
}

LoadedData parse_vectors(std::istream& in, bool standardize_flag, bool skip_header) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (skip_header && line == 1) continue;
    if (blank(text)) continue;
    const auto row = split_numbers(text, line, false);
    if (rows == 0) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw DataError(at_line(line) + "expected " + std::to_string(dim) + " columns, found " +
                      std::to_string(row.size()));
    }
    coords.insert(coords.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw DataError("no vectors");
  if (standardize_flag) coords = standardize(dim, coords);
  return {Dataset::from_vectors(dim, std::move(coords)), identity_map(rows)};
}

LoadedData load_vectors(const std::string& path, bool standardize_flag, bool skip_header) {
  auto in = open_input(path);
  return parse_vectors(in, standardize_flag, skip_header);
}

LoadedData parse_matrix(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t width = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    const auto row = split_numbers(text, line, true);
    if (rows == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw DataError(at_line(line) + "expected " + std::to_string(width) + " columns, found " +
                      std::to_string(row.size()));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw DataError("empty matrix");
  if (rows != width) {
    throw DataError("matrix is " + std::to_string(rows) + "x" + std::to_string(width) + ", expected square");
  }
  return {Dataset::from_matrix(rows, std::move(values)), identity_map(rows)};
}

LoadedData load_matrix(const std::string& path) {
  auto in = open_input(path);
  return parse_matrix(in);
}

LoadedData load_dataset(const std::string& path, DataFormat format, MetricKind metric, const LoadOptions& options) {
  const bool fits = (format == DataFormat::kSets && metric == MetricKind::kJaccard) ||
                    (format == DataFormat::kVectors && metric == MetricKind::kEuclidean) ||
                    (format == DataFormat::kMatrix && metric == MetricKind::kExplicitMatrix);
  if (!fits) {
    throw ContractViolation(std::string(to_string(format)) + " data cannot be measured with the " +
                            std::string(to_string(metric)) + " metric");
  }
  switch (format) {
    case DataFormat::kSets:
      return load_sets(path);
    case DataFormat::kVectors:
      return load_vectors(path, options.standardize, options.skip_header);
    case DataFormat::kMatrix:
      return load_matrix(path);
  }
  throw ContractViolation("unknown data format");
}

std::vector<std::uint8_t> serialize_index(const FinexIndex& index) {
  const auto& ordering = index.ordering();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + kRecordBytes * ordering.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u64(out, kIndexFormatVersion, 4);
  put_u64(out, static_cast<std::uint8_t>(index.metric()), 1);
  put_f64(out, index.params().epsilon);
  put_u64(out, index.params().min_pts);
  put_u64(out, ordering.size());
  out.insert(out.end(), index.fingerprint().begin(), index.fingerprint().end());
  for (const auto& e : ordering.entries()) {
    put_u64(out, e.object);
    put_f64(out, e.core);
    put_f64(out, e.reach);
    put_u64(out, e.hood_size);
    put_u64(out, e.finder);
  }
  return out;
}

FinexIndex deserialize_index(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  std::uint8_t magic[4];
  r.raw(magic, 4);
  if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) throw DataError("bad magic: not an FNX1 index");
  const auto version = r.u(4);
  if (version != kIndexFormatVersion) {
    throw DataError("index format version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kIndexFormatVersion) + ")");
  }
  const auto tag = r.u(1);
  if (tag < 1 || tag > 3) throw DataError("unknown metric tag " + std::to_string(tag));
  const auto metric = static_cast<MetricKind>(tag);
  GeneratingParams params;
  params.epsilon = r.f64();
  params.min_pts = r.u(8);
  try {
    params.validate();
  } catch (const ContractViolation& e) {
    throw DataError(std::string("index header: ") + e.what());
  }
  const auto n = r.u(8);
  Fingerprint fp{};
  r.raw(fp.data(), fp.size());
  if (r.remaining() / kRecordBytes < n) throw DataError("index file is truncated");
  if (r.remaining() != n * kRecordBytes) throw DataError("index file has trailing bytes");

  std::vector<IndexEntry> entries;
  entries.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    IndexEntry e;
    const auto object = r.u(8);
    e.position = i + 1;
    e.core = r.f64();
    e.reach = r.f64();
    e.hood_size = r.u(8);
    const auto finder = r.u(8);
    if (object >= n || finder >= n) throw DataError("index record " + std::to_string(i) + " references a missing object");
    e.object = static_cast<ObjectId>(object);
    e.finder = static_cast<ObjectId>(finder);
    entries.push_back(e);
  }
  return FinexIndex(ClusterOrdering(std::move(entries), params, Flavor::kFinex), metric, fp);
}

void save_index(const std::string& path, const FinexIndex& index) {
  const auto bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path);
}

FinexIndex load_index(const std::string& path, const Dataset* data, FingerprintCheck check, std::ostream* warnings) {
  auto in = open_input(path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto index = deserialize_index(bytes);
  if (data) {
    if (data->metric() != index.metric() || data->size() != index.size() || check == FingerprintCheck::kStrict) {
      index.check_dataset(*data);
    } else if (data->fingerprint() != index.fingerprint()) {
      if (warnings) {
        *warnings << "warning: dataset fingerprint " << to_hex(data->fingerprint())
                  << " does not match index fingerprint " << to_hex(index.fingerprint()) << "\n";
      }
      // Accepted mismatch: re-stamp so later identity checks pass.
      index = FinexIndex(index.ordering(), index.metric(), data->fingerprint());
    }
  }
  return index;
}

void write_labeling(std::ostream& out, const Labeling& labeling, const std::vector<ObjectId>& record_to_object) {
  out << "object_id,cluster_id,is_core\n";
  for (std::size_t r = 0; r < record_to_object.size(); ++r) {
    const ObjectId o = record_to_object[r];
    if (o >= labeling.size()) throw std::invalid_argument("labeling does not cover record " + std::to_string(r));
    out << r << ',' << labeling.cluster[o] << ',' << (labeling.core[o] ? "true" : "false") << '\n';
  }
}

void write_labeling(const std::string& path, const Labeling& labeling, const std::vector<ObjectId>& record_to_object) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  write_labeling(out, labeling, record_to_object);
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace finex
