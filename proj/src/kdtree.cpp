#include "mlmc/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mlmc/error.hpp"

namespace mlmc {

KdTree::KdTree(std::span<const double> points, std::size_t dim, std::size_t leaf_size)
    : num_points_(dim == 0 ? 0 : points.size() / dim),
      dim_(dim),
      leaf_size_(std::max<std::size_t>(1, leaf_size)),
      points_(points.begin(), points.end()) {
  if (dim == 0 || points.size() % dim != 0) throw ContractViolation("kd-tree: bad point buffer");
  order_.resize(num_points_);
  std::iota(order_.begin(), order_.end(), NodeId{0});
  leaf_of_.assign(num_points_, -1);
  active_.assign(num_points_, 1);
  if (num_points_ > 0) {
    nodes_.reserve(2 * num_points_ / leaf_size_ + 1);
    build(0, num_points_, -1);
  }
}

int KdTree::build(std::size_t begin, std::size_t end, int parent) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, 0, 0.0, -1, -1, parent, end - begin});

  if (end - begin <= leaf_size_) {
    for (std::size_t k = begin; k < end; ++k) leaf_of_[order_[k]] = id;
    return id;
  }

  // Split on the dimension of largest spread.
  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = begin; k < end; ++k) {
      double v = points_[order_[k] * dim_ + c];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = c;
    }
  }

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end), [&](NodeId a, NodeId b) {
                     return points_[a * dim_ + best_dim] < points_[b * dim_ + best_dim];
                   });
  nodes_[id].split_dim = best_dim;
  nodes_[id].split = points_[order_[mid] * dim_ + best_dim];
  const int left = build(begin, mid, id);
  const int right = build(mid, end, id);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::deactivate(NodeId id) {
  if (!active_[id]) return;
  active_[id] = 0;
  for (int n = leaf_of_[id]; n >= 0; n = nodes_[n].parent) --nodes_[n].active;
}

double KdTree::dist2(std::span<const double> q, NodeId id) const noexcept {
  const double* p = points_.data() + id * dim_;
  double s = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    double d = q[c] - p[c];
    s += d * d;
  }
  return s;
}

void KdTree::search(int node, std::span<const double> q, double& best_d2,
                    std::optional<NodeId>& best) const {
  const Node& nd = nodes_[node];
  if (nd.active == 0) return;
  if (nd.left < 0) {
    for (std::size_t k = nd.begin; k < nd.end; ++k) {
      NodeId id = order_[k];
      if (!active_[id]) continue;
      double d2 = dist2(q, id);
      if (d2 < best_d2 || (d2 == best_d2 && (!best || id < *best))) {
        best_d2 = d2;
        best = id;
      }
    }
    return;
  }
  const double diff = q[nd.split_dim] - nd.split;
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  search(near, q, best_d2, best);
  // <= keeps equal-distance points reachable for the id tie-break.
  if (diff * diff <= best_d2) search(far, q, best_d2, best);
}

std::optional<NodeId> KdTree::nearest_active(std::span<const double> query) const {
  if (query.size() != dim_) throw ContractViolation("kd-tree: query dimension mismatch");
  std::optional<NodeId> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  if (!nodes_.empty()) search(0, query, best_d2, best);
  return best;
}

}  // namespace mlmc
