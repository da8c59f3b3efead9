#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mlmc/graph.hpp"

namespace mlmc {

/**
 * K free nodes of a larger instance, with every other node folded into two
 * pinned super-nodes: super-node 0 holds the fixed part-0 nodes, super-node
 * 1 the fixed part-1 nodes. Super-nodes are not variables; they appear only
 * as linear biases, so a solver sees exactly K binary variables.
 *
 *   objective(y) = constant
 *                + sum_i ( y_i * bias0[i] + (1 - y_i) * bias1[i] )
 *                + sum_{ij internal} w_ij [y_i != y_j]
 *
 * which equals the full cut value of the merged assignment.
 */
struct Subproblem {
  std::vector<NodeId> free_nodes;
  /// Edges among the free nodes, reindexed to 0..K-1.
  Graph internal;
  std::vector<double> bias0;
  std::vector<double> bias1;
  /// Cut weight between fixed part-0 and fixed part-1 nodes.
  double constant = 0.0;

  std::size_t size() const noexcept { return free_nodes.size(); }
};

/// Pin-free subproblem covering a whole graph.
Subproblem whole_graph_subproblem(const Graph& g);

Subproblem build_subproblem(const Graph& g, const CutAssignment& x, std::span<const NodeId> chosen);

double subproblem_objective(const Subproblem& sp, std::span<const std::uint8_t> y);

/// Change in objective from flipping each variable of y.
std::vector<double> subproblem_gains(const Subproblem& sp, std::span<const std::uint8_t> y);

/// x restricted to the free nodes.
Bits restrict_to(const Subproblem& sp, const CutAssignment& x);

/// Writes y into x, flipping only the free nodes whose value changes so
/// that the objective and gain table stay incrementally consistent.
void merge_solution(const Graph& g, CutAssignment& x, GainTable& gains, const Subproblem& sp,
                    std::span<const std::uint8_t> y);

/**
 * Maximization QUBO text form:
 *   offset <c>
 *   linear <i> <a_i>
 *   quadratic <i> <j> <b_ij>
 * with objective(y) = c + sum a_i y_i + sum b_ij y_i y_j.
 */
void write_qubo(std::ostream& out, const Subproblem& sp);

}  // namespace mlmc
