#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "graspness/core.hpp"

namespace graspness {

struct Neighbor {
  std::size_t index;
  double distance;
};

namespace detail {

struct HeapEntry {
  double d2;
  std::size_t index;
  bool operator<(const HeapEntry& o) const {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

}  // namespace detail

/// Exact k-nearest-neighbour and radius queries over a fixed set of
/// positions. Results match a linear scan exactly, including the
/// (distance, index) ordering of ties.
template <typename Scalar>
class KdTree {
 public:
  using Point = Vector3<Scalar>;

  KdTree() = default;

  explicit KdTree(std::span<const Point> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!points_.empty()) {
      nodes_.reserve(2 * points_.size() / kLeafSize + 2);
      build(0, points_.size());
    }
  }

  explicit KdTree(const std::vector<Point>& points) : KdTree(std::span<const Point>(points)) {}

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }

  /// The k closest points, ascending by (distance, index).
  std::vector<Neighbor> knn(const Point& query, std::size_t k) const {
    if (empty()) throw InvalidState("nearest-neighbour query on an empty index");
    if (k == 0) throw InvalidArgument("k must be at least 1");
    k = std::min(k, points_.size());
    std::priority_queue<detail::HeapEntry> heap;
    knn_recurse(0, query, k, heap);
    std::vector<Neighbor> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      out[i] = {heap.top().index, std::sqrt(static_cast<double>(heap.top().d2))};
      heap.pop();
    }
    return out;
  }

  Neighbor nearest(const Point& query) const { return knn(query, 1).front(); }

  /// Indices with squared distance <= radius^2, ascending by index.
  std::vector<std::size_t> radius_search(const Point& query, Scalar radius) const {
    std::vector<std::size_t> out;
    if (empty()) return out;
    radius_recurse(0, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t kLeafSize = 12;

  struct Node {
    std::size_t begin, end;
    int axis = -1;  // -1 for leaves
    Scalar split = 0;
    std::size_t left = 0, right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;

    Point lo = points_[order_[begin]], hi = lo;
    for (std::size_t i = begin; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis;
    (hi - lo).maxCoeff(&axis);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
    const Scalar split = points_[order_[mid]][axis];
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    Node& n = nodes_[id];
    n.axis = axis;
    n.split = split;
    n.left = left;
    n.right = right;
    return id;
  }

  void knn_recurse(std::size_t id, const Point& q, std::size_t k,
                   std::priority_queue<detail::HeapEntry>& heap) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t idx = order_[i];
        const detail::HeapEntry e{static_cast<double>((points_[idx] - q).squaredNorm()), idx};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    const Scalar diff = q[n.axis] - n.split;
    const std::size_t near = diff < 0 ? n.left : n.right;
    const std::size_t far = diff < 0 ? n.right : n.left;
    knn_recurse(near, q, k, heap);
    // Points on the far side are at least |diff| away along the split axis.
    if (heap.size() < k || static_cast<double>(diff * diff) <= heap.top().d2) {
      knn_recurse(far, q, k, heap);
    }
  }

  void radius_recurse(std::size_t id, const Point& q, Scalar r2, std::vector<std::size_t>& out) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t idx = order_[i];
        if ((points_[idx] - q).squaredNorm() <= r2) out.push_back(idx);
      }
      return;
    }
    const Scalar diff = q[n.axis] - n.split;
    const std::size_t near = diff < 0 ? n.left : n.right;
    const std::size_t far = diff < 0 ? n.right : n.left;
    radius_recurse(near, q, r2, out);
    if (diff * diff <= r2) radius_recurse(far, q, r2, out);
  }

  std::vector<Point> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

using SpatialIndex = KdTree<double>;

/// Linear-scan k nearest neighbours with the same ordering contract as KdTree.
template <typename Scalar>
std::vector<Neighbor> brute_force_knn(std::span<const Vector3<Scalar>> points,
                                      const Vector3<Scalar>& query, std::size_t k) {
  if (points.empty()) throw InvalidState("nearest-neighbour query on an empty set");
  std::vector<detail::HeapEntry> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    all[i] = {static_cast<double>((points[i] - query).squaredNorm()), i};
  }
  k = std::min(k, points.size());
  std::partial_sort(all.begin(), all.begin() + k, all.end());
  std::vector<Neighbor> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = {all[i].index, std::sqrt(all[i].d2)};
  return out;
}

}  // namespace graspness
