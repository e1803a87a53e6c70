#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "acmon/synthdata.hpp"

namespace acmon {

// Static 2-d k-d tree for exact k-nearest-neighbour queries. Distance ties
// are broken by the lower point index, matching a stable brute-force scan.
class KdTree2 {
 public:
  explicit KdTree2(std::vector<Point2> points) : points_(std::move(points)), order_(points_.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!points_.empty()) build(0, points_.size(), 0);
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point2>& points() const noexcept { return points_; }

  // Indices of the k nearest points, closest first.
  std::vector<std::size_t> nearest(Point2 q, std::size_t k) const {
    k = std::min(k, points_.size());
    std::vector<Candidate> best;
    best.reserve(k + 1);
    if (k > 0) search(0, q, k, best);
    std::sort(best.begin(), best.end());
    std::vector<std::size_t> out(best.size());
    for (std::size_t i = 0; i < best.size(); ++i) out[i] = best[i].index;
    return out;
  }

 private:
  static constexpr std::size_t kLeafSize = 16;

  struct Node {
    std::size_t begin = 0, end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0, right = 0;
  };

  struct Candidate {
    double dist2;
    std::size_t index;
    bool operator<(const Candidate& o) const { return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index); }
  };

  static double coord(const Point2& p, int axis) { return axis == 0 ? p.x1 : p.x2; }

  std::size_t build(std::size_t begin, std::size_t end, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;
    const int axis = depth % 2;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) { return coord(points_[a], axis) < coord(points_[b], axis); });
    const double split = coord(points_[order_[mid]], axis);
    const std::size_t left = build(begin, mid, depth + 1);
    const std::size_t right = build(mid, end, depth + 1);
    auto& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
  }

  void search(std::size_t id, Point2 q, std::size_t k, std::vector<Candidate>& best) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const double dx = points_[idx].x1 - q.x1;
        const double dy = points_[idx].x2 - q.x2;
        const Candidate c{dx * dx + dy * dy, idx};
        if (best.size() < k) {
          best.push_back(c);
          std::push_heap(best.begin(), best.end());
        } else if (c < best.front()) {
          std::pop_heap(best.begin(), best.end());
          best.back() = c;
          std::push_heap(best.begin(), best.end());
        }
      }
      return;
    }
    const double diff = coord(q, node.axis) - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search(near, q, k, best);
    if (best.size() < k || diff * diff <= best.front().dist2) search(far, q, k, best);
  }

  std::vector<Point2> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace acmon
