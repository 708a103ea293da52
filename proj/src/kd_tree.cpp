#include <algorithm>
#include <cmath>
#include <numeric>

#include "backends.hpp"

namespace finex::detail {

namespace {

constexpr std::size_t kLeafSize = 16;

// Static kd-tree over the dataset's vectors. Points are stored permuted so
// that each node owns a contiguous range; every node keeps the bounding box
// of its points for exact pruning.
class KdTreeProvider final : public NeighborProvider {
 public:
  KdTreeProvider(const Dataset& data, double epsilon)
      : NeighborProvider(data, epsilon, Backend::kKdTree), dim_(data.dimension()) {
    const std::size_t n = data.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), ObjectId{0});
    nodes_.reserve(2 * (n / kLeafSize + 1));
    build(0, n);
    points_.resize(n * dim_);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = data.vector(order_[i]);
      std::copy(v.begin(), v.end(), points_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    }
  }

 protected:
  void collect(ObjectId p, double radius, std::vector<Neighbor>& out,
               std::uint64_t& distance_count) const override {
    const auto query = dataset().vector(p);
    search(0, query, radius, out, distance_count);
  }

 private:
  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t left = 0;   // 0 marks a leaf (the root is never a child)
    std::size_t right = 0;
    std::vector<double> lo;
    std::vector<double> hi;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t index = nodes_.size();
    nodes_.push_back(Node{begin, end, 0, 0, std::vector<double>(dim_, kInfinity),
                          std::vector<double>(dim_, -kInfinity)});
    {
      auto& node = nodes_[index];
      for (std::size_t i = begin; i < end; ++i) {
        auto v = dataset().vector(order_[i]);
        for (std::size_t k = 0; k < dim_; ++k) {
          node.lo[k] = std::min(node.lo[k], v[k]);
          node.hi[k] = std::max(node.hi[k], v[k]);
        }
      }
    }
    if (end - begin <= kLeafSize) return index;

    std::size_t split_dim = 0;
    double widest = -1.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double spread = nodes_[index].hi[k] - nodes_[index].lo[k];
      if (spread > widest) {
        widest = spread;
        split_dim = k;
      }
    }
    if (widest <= 0.0) return index;  // all points identical

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](ObjectId a, ObjectId b) {
                       return dataset().vector(a)[split_dim] < dataset().vector(b)[split_dim];
                     });
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  // Lower bound on the distance from query to any point in the node's box.
  // Each per-axis gap is no larger than the corresponding coordinate
  // difference of any contained point, and rounding is monotone, so the
  // bound never exceeds a computed point distance.
  double box_distance(const Node& node, std::span<const double> query) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double gap = 0.0;
      if (query[k] < node.lo[k]) {
        gap = node.lo[k] - query[k];
      } else if (query[k] > node.hi[k]) {
        gap = query[k] - node.hi[k];
      }
      sum += gap * gap;
    }
    return std::sqrt(sum);
  }

  void search(std::size_t index, std::span<const double> query, double radius, std::vector<Neighbor>& out,
              std::uint64_t& distance_count) const {
    const Node& node = nodes_[index];
    if (box_distance(node, query) > radius) return;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        std::span<const double> point(points_.data() + i * dim_, dim_);
        const double d = euclidean_distance(query, point);
        ++distance_count;
        if (d <= radius) out.push_back({order_[i], d});
      }
      return;
    }
    search(node.left, query, radius, out, distance_count);
    search(node.right, query, radius, out, distance_count);
  }

  std::size_t dim_;
  std::vector<ObjectId> order_;
  std::vector<double> points_;
  std::vector<Node> nodes_;
};

}  // namespace

std::unique_ptr<NeighborProvider> make_kd_tree(const Dataset& data, double epsilon) {
  return std::make_unique<KdTreeProvider>(data, epsilon);
}

}  // namespace finex::detail
