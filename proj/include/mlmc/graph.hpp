#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mlmc {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Binary part labels, one byte per node (0 or 1).
using Bits = std::vector<std::uint8_t>;

struct Edge {
  NodeId u;
  NodeId v;
  double w;
};

struct Neighbor {
  NodeId node;
  double weight;
  EdgeId edge;
};

/**
 * Weighted undirected simple graph in CSR form.
 *
 * Construction normalizes the edge list: endpoints are ordered (u < v),
 * self-loops are dropped and counted, and parallel edges are merged by
 * summing their weights. The merge is performed on a stably sorted list so
 * the summation order, and hence every weight, is deterministic.
 *
 * Immutable after construction; safe to share across threads.
 */
class Graph {
 public:
  Graph() = default;
  Graph(NodeId num_nodes, std::vector<Edge> edges);

  NodeId num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Neighbor> neighbors(NodeId i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  /// Sum of weights incident to i.
  double weighted_degree(NodeId i) const noexcept;

  double total_weight() const noexcept { return total_weight_; }

  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }
  std::size_t duplicates_merged() const noexcept { return duplicates_merged_; }

 private:
  NodeId num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
  std::size_t self_loops_dropped_ = 0;
  std::size_t duplicates_merged_ = 0;
};

/// Assignment x with its cached cut value. Maintained by apply_flip.
struct CutAssignment {
  Bits x;
  double objective = 0.0;
};

/// gain[i] = cut(x with i flipped) - cut(x).
struct GainTable {
  std::vector<double> gain;
};

/// Sum of w_ij over edges with x_i != x_j.
double cut_value(const Graph& g, std::span<const std::uint8_t> x);

GainTable compute_gains(const Graph& g, std::span<const std::uint8_t> x);

CutAssignment make_assignment(const Graph& g, Bits x);

/// Flips node i in O(deg(i)), keeping objective and gains consistent.
void apply_flip(const Graph& g, CutAssignment& a, GainTable& gains, NodeId i);

}  // namespace mlmc
