#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mlmc/graph.hpp"

namespace mlmc {

/**
 * Static k-d tree over n points in R^d with point deactivation.
 *
 * nearest_active() is an exact nearest-neighbor query restricted to points
 * that have not been deactivated; ties in distance resolve to the smallest
 * point id. Subtrees whose points are all inactive are skipped, so greedy
 * matching (query, then deactivate both endpoints) stays near O(n log n).
 */
class KdTree {
 public:
  /// `points` is row-major, n rows of `dim` coordinates.
  KdTree(std::span<const double> points, std::size_t dim, std::size_t leaf_size = 8);

  std::size_t size() const noexcept { return num_points_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t active_count() const noexcept { return nodes_.empty() ? 0 : nodes_[0].active; }
  bool active(NodeId id) const noexcept { return active_[id] != 0; }

  void deactivate(NodeId id);

  std::optional<NodeId> nearest_active(std::span<const double> query) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t split_dim = 0;
    double split = 0.0;
    int left = -1;
    int right = -1;
    int parent = -1;
    std::size_t active = 0;
  };

  int build(std::size_t begin, std::size_t end, int parent);
  void search(int node, std::span<const double> q, double& best_d2, std::optional<NodeId>& best) const;
  double dist2(std::span<const double> q, NodeId id) const noexcept;

  std::size_t num_points_;
  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<double> points_;
  std::vector<NodeId> order_;
  std::vector<Node> nodes_;
  std::vector<int> leaf_of_;
  std::vector<std::uint8_t> active_;
};

}  // namespace mlmc
