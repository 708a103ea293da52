#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace oracle {

namespace {

double jaccard(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const std::size_t uni = a.size() + b.size() - common.size();
  return 1.0 - static_cast<double>(common.size()) / static_cast<double>(uni);
}

double euclid(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Distances::Distances(const Dataset& data) : n_(data.size()), d_(n_ * n_), w_(n_, 1) {
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      double v = 0.0;
      switch (data.metric()) {
        case finex::MetricKind::kJaccard:
          v = jaccard(data.sets()[a].tokens, data.sets()[b].tokens);
          break;
        case finex::MetricKind::kEuclidean:
          v = euclid(data.coords().data() + a * data.dimension(), data.coords().data() + b * data.dimension(),
                     data.dimension());
          break;
        case finex::MetricKind::kExplicitMatrix:
          v = data.matrix()[a * n_ + b];
          break;
      }
      d_[a * n_ + b] = v;
    }
    if (data.metric() == finex::MetricKind::kJaccard) w_[a] = data.sets()[a].count;
  }
}

std::vector<ObjectId> Distances::hood(ObjectId p, double radius) const {
  std::vector<ObjectId> out;
  for (std::size_t q = 0; q < n_; ++q) {
    if ((*this)(p, static_cast<ObjectId>(q)) <= radius) out.push_back(static_cast<ObjectId>(q));
  }
  return out;
}

std::uint64_t Distances::hood_weight(ObjectId p, double radius) const {
  std::uint64_t w = 0;
  for (ObjectId q : hood(p, radius)) w += w_[q];
  return w;
}

double Distances::core_distance(ObjectId p, double radius, std::uint64_t min_pts) const {
  std::vector<std::pair<double, ObjectId>> near;
  for (ObjectId q : hood(p, radius)) near.emplace_back((*this)(p, q), q);
  std::sort(near.begin(), near.end());
  std::uint64_t w = 0;
  for (const auto& [dist, q] : near) {
    w += w_[q];
    if (w >= min_pts) return dist;
  }
  return finex::kInfinity;
}

Labeling dbscan(const Distances& d, double epsilon, std::uint64_t min_pts) {
  const std::size_t n = d.size();
  std::vector<bool> core(n);
  for (std::size_t p = 0; p < n; ++p) core[p] = d.hood_weight(static_cast<ObjectId>(p), epsilon) >= min_pts;
  UnionFind uf(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!core[a]) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (core[b] && d(static_cast<ObjectId>(a), static_cast<ObjectId>(b)) <= epsilon) uf.unite(a, b);
    }
  }
  Labeling out;
  out.cluster.assign(n, finex::kNoise);
  out.core = core;
  std::map<std::size_t, ClusterId> ids;
  for (std::size_t p = 0; p < n; ++p) {
    if (!core[p]) continue;
    const auto root = uf.find(p);
    auto it = ids.find(root);
    if (it == ids.end()) it = ids.emplace(root, out.num_clusters++).first;
    out.cluster[p] = it->second;
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (core[p]) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (core[c] && d(static_cast<ObjectId>(p), static_cast<ObjectId>(c)) <= epsilon) {
        out.cluster[p] = out.cluster[c];
        break;
      }
    }
  }
  return out;
}

std::optional<std::string> inequivalence(const Labeling& candidate, const Distances& d, double epsilon,
                                         std::uint64_t min_pts) {
  const auto truth = dbscan(d, epsilon, min_pts);
  const std::size_t n = d.size();
  if (candidate.size() != n) return "size " + std::to_string(candidate.size()) + " vs " + std::to_string(n);
  for (std::size_t p = 0; p < n; ++p) {
    if ((candidate.cluster[p] == finex::kNoise) != (truth.cluster[p] == finex::kNoise)) {
      return "noise status differs for object " + std::to_string(p);
    }
    if (candidate.core[p] != truth.core[p]) return "core flag differs for object " + std::to_string(p);
  }
  // Core partitions: same-cluster relation must agree on every core pair.
  std::map<ClusterId, ClusterId> fwd;
  std::map<ClusterId, ClusterId> back;
  for (std::size_t p = 0; p < n; ++p) {
    if (!truth.core[p]) continue;
    const auto c = candidate.cluster[p];
    const auto t = truth.cluster[p];
    const auto f = fwd.emplace(c, t).first;
    const auto b = back.emplace(t, c).first;
    if (f->second != t || b->second != c) return "core partition differs at object " + std::to_string(p);
  }
  if (static_cast<ClusterId>(fwd.size()) != truth.num_clusters || candidate.num_clusters != truth.num_clusters) {
    return "cluster count " + std::to_string(candidate.num_clusters) + " vs " + std::to_string(truth.num_clusters);
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (candidate.cluster[p] == finex::kNoise || truth.core[p]) continue;
    bool ok = false;
    for (std::size_t c = 0; c < n && !ok; ++c) {
      ok = truth.core[c] && candidate.cluster[c] == candidate.cluster[p] &&
           d(static_cast<ObjectId>(p), static_cast<ObjectId>(c)) <= epsilon;
    }
    if (!ok) return "border " + std::to_string(p) + " is not next to a core of its cluster";
  }
  return std::nullopt;
}

std::vector<ObjectId> borders(const Labeling& exact) {
  std::vector<ObjectId> out;
  for (std::size_t p = 0; p < exact.size(); ++p) {
    if (exact.cluster[p] != finex::kNoise && !exact.core[p]) out.push_back(static_cast<ObjectId>(p));
  }
  return out;
}

}  // namespace oracle

namespace gen {

finex::Dataset blobs(std::uint64_t seed, std::size_t n, std::size_t dim, std::size_t centers, double spread,
                     double extent, double noise_fraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, extent);
  std::normal_distribution<double> jitter(0.0, spread);
  std::bernoulli_distribution is_noise(noise_fraction);
  std::vector<double> mids(centers * dim);
  for (auto& m : mids) m = unit(rng);
  std::uniform_int_distribution<std::size_t> pick(0, centers - 1);
  std::vector<double> coords;
  coords.reserve(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_noise(rng)) {
      for (std::size_t k = 0; k < dim; ++k) coords.push_back(unit(rng));
    } else {
      const auto c = pick(rng);
      for (std::size_t k = 0; k < dim; ++k) coords.push_back(mids[c * dim + k] + jitter(rng));
    }
  }
  return finex::Dataset::from_vectors(dim, std::move(coords));
}

finex::Dataset grid(std::uint64_t seed, std::size_t n, std::size_t side) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, static_cast<int>(side) - 1);
  std::vector<double> coords;
  for (std::size_t i = 0; i < n; ++i) {
    coords.push_back(coord(rng));
    coords.push_back(coord(rng));
  }
  return finex::Dataset::from_vectors(2, std::move(coords));
}

finex::Dataset sets(std::uint64_t seed, std::size_t records, std::size_t prototypes, std::size_t vocabulary) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> token(0, static_cast<std::uint32_t>(vocabulary) - 1);
  std::uniform_int_distribution<std::size_t> proto_size(4, 9);
  std::vector<std::vector<std::uint32_t>> protos(prototypes);
  for (auto& p : protos) {
    const auto k = proto_size(rng);
    while (p.size() < k) p.push_back(token(rng));
  }
  std::uniform_int_distribution<std::size_t> pick(0, prototypes - 1);
  std::uniform_int_distribution<int> edits(0, 3);
  std::bernoulli_distribution random_record(0.15);
  std::bernoulli_distribution duplicate(0.2);
  std::vector<std::vector<std::uint32_t>> raw;
  for (std::size_t r = 0; r < records; ++r) {
    if (!raw.empty() && duplicate(rng)) {
      std::uniform_int_distribution<std::size_t> prev(0, raw.size() - 1);
      raw.push_back(raw[prev(rng)]);
      continue;
    }
    std::vector<std::uint32_t> rec;
    if (random_record(rng)) {
      const auto k = proto_size(rng);
      while (rec.size() < k) rec.push_back(token(rng));
    } else {
      rec = protos[pick(rng)];
      const int e = edits(rng);
      for (int i = 0; i < e; ++i) {
        if (rec.size() > 2 && (rng() & 1U)) {
          rec.erase(rec.begin() + static_cast<std::ptrdiff_t>(rng() % rec.size()));
        } else {
          rec.push_back(token(rng));
        }
      }
    }
    raw.push_back(std::move(rec));
  }
  return finex::Dataset::from_sets(finex::deduplicate(raw).sets);
}

finex::Dataset uniform(std::uint64_t seed, std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = unit(rng);
  return finex::Dataset::from_vectors(dim, std::move(coords));
}

}  // namespace gen

namespace harness {

std::vector<Instance> instances(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = rng();
    std::uniform_int_distribution<std::uint64_t> minpts(3, 8);
    const std::uint64_t m = minpts(rng);
    const std::string tag = std::to_string(i);
    switch (i % 4) {
      case 0: {
        std::uniform_int_distribution<std::size_t> size(120, 300);
        const double eps = std::uniform_real_distribution<double>(0.45, 0.7)(rng);
        out.push_back({"sets-" + tag, gen::sets(s, size(rng), 6, 40), {eps, m}, {}, {}});
        break;
      }
      case 1: {
        std::uniform_int_distribution<std::size_t> size(200, 500);
        const double eps = std::uniform_real_distribution<double>(0.5, 1.2)(rng);
        out.push_back({"vec2d-" + tag, gen::blobs(s, size(rng), 2, 5, 0.6, 12.0, 0.15), {eps, m}, {}, {}});
        break;
      }
      case 2: {
        std::uniform_int_distribution<std::size_t> size(200, 500);
        const double eps = std::uniform_real_distribution<double>(1.2, 2.2)(rng);
        out.push_back({"vec5d-" + tag, gen::blobs(s, size(rng), 5, 4, 0.6, 10.0, 0.15), {eps, m}, {}, {}});
        break;
      }
      default: {
        std::uniform_int_distribution<std::size_t> size(150, 400);
        const double eps = std::uniform_int_distribution<int>(1, 2)(rng);
        out.push_back({"grid-" + tag, gen::grid(s, size(rng), 16), {eps, m}, {}, {}});
        break;
      }
    }
    auto& inst = out.back();
    const double eps = inst.params.epsilon;
    inst.epsilon_stars = {0.0, eps * 0.3, eps * 0.5, eps * 0.7, eps * 0.85, eps};
    if (inst.name.rfind("grid", 0) == 0) {
      // Lattice radii (1, sqrt 2, 2) hit exact distance ties.
      inst.epsilon_stars = {0.0, eps * 0.25, eps * 0.5, eps * 0.75, 1.0, std::sqrt(2.0), eps};
      std::sort(inst.epsilon_stars.begin(), inst.epsilon_stars.end());
      inst.epsilon_stars.erase(std::remove_if(inst.epsilon_stars.begin(), inst.epsilon_stars.end(),
                                              [eps](double v) { return v > eps; }),
                               inst.epsilon_stars.end());
      inst.epsilon_stars.erase(std::unique(inst.epsilon_stars.begin(), inst.epsilon_stars.end()),
                               inst.epsilon_stars.end());
    }
    inst.min_pts_stars = {m, m + 1, m + 2, m + 4, m + 7, 2 * m + 10};
  }
  return out;
}

}  // namespace harness
