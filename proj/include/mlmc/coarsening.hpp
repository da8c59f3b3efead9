#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mlmc/embedding.hpp"
#include "mlmc/graph.hpp"

namespace mlmc {

/// Fine-to-coarse surjection F produced by pairwise matching.
struct ContractionMap {
  std::vector<NodeId> fine_to_coarse;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::optional<NodeId> singleton;

  /// Coarse ids: pair q maps to q, the singleton (if any) to pairs.size().
  NodeId num_coarse() const noexcept {
    return static_cast<NodeId>(pairs.size() + (singleton ? 1 : 0));
  }
};

/// Greedy nearest-neighbor pairing, visiting nodes in a seeded random order.
ContractionMap match_pairs(const Graph& g, const Embedding& e, std::uint64_t seed);

/// Same pairing rule with an explicit visit order (a permutation of 0..n-1).
ContractionMap match_pairs_in_order(const Embedding& e, std::span<const NodeId> order);

struct Contraction {
  Graph coarse;
  /// Weight of fine edges that became coarse self-loops and were dropped.
  double lost_weight = 0.0;
};

/// Coarse graph of P^T A P with the diagonal removed.
Contraction contract(const Graph& fine, const ContractionMap& map);

struct SparsifyResult {
  Graph graph;
  std::size_t removed = 0;
  /// Candidates kept because no adjacent edge survived to take their weight.
  std::size_t kept_isolated = 0;
};

/**
 * Removes the floor(fraction * m) shortest edges by weighted embedding length
 * w_ij |p_i - p_j|, moving each removed edge's weight onto the surviving
 * adjacent edge of greatest (unweighted) embedding length. Lengths are
 * measured once up front. A candidate with no surviving neighbor edge is
 * kept and its slot is not handed to another edge. Total weight is
 * preserved.
 */
SparsifyResult sparsify(const Graph& g, const Embedding& e, double fraction);

struct HierarchyOptions {
  /// Coarsening stops once a level has fewer than this many nodes.
  NodeId subproblem_size = 100;
  EmbedOptions embed;
  double sparsify_fraction = 0.0;
};

/**
 * Level k holds G_k as used for refinement. When sparsification is on, the
 * sparsified copy of G_k is what gets contracted into G_{k+1}; G_k itself
 * is kept intact so refinement optimizes the true objective.
 */
struct Hierarchy {
  std::vector<Graph> levels;
  std::vector<ContractionMap> maps;
  std::vector<Embedding> embeddings;
  std::vector<double> lost_weight;
  /// Total weight of the graph that was contracted at level k (after sparsify).
  std::vector<double> contracted_weight;
  std::vector<std::size_t> sparsified_edges;

  std::size_t num_levels() const noexcept { return levels.size(); }
  bool coarsened() const noexcept { return levels.size() > 1; }
  const Graph& coarsest() const { return levels.back(); }
};

Hierarchy build_hierarchy(const Graph& g, const HierarchyOptions& options, std::uint64_t seed);

}  // namespace mlmc
