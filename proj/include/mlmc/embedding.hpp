#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlmc/graph.hpp"

namespace mlmc {

/// Node positions on the unit sphere in R^d, stored row-major.
class Embedding {
 public:
  Embedding() = default;
  Embedding(std::size_t num_nodes, std::size_t dim)
      : num_nodes_(num_nodes), dim_(dim), positions_(num_nodes * dim, 0.0) {}

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> row(std::size_t i) noexcept { return {positions_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {positions_.data() + i * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return positions_; }

  int iterations_run = 0;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::size_t num_nodes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> positions_;
};

struct EmbedOptions {
  std::size_t dim = 3;
  int max_sweeps = 30;
  /// Stop once the mean per-node displacement of a sweep drops below this.
  double tolerance = 1e-4;
};

/// Called after each sweep with the 1-based sweep index.
using SweepObserver = std::function<void(int sweep, const Embedding& e)>;

/**
 * Max-cut distance embedding.
 *
 * Positions start uniformly in [-1,1]^d and are projected onto the unit
 * sphere. Each sweep visits the nodes in a fresh seeded permutation and
 * moves p_i one projected ascent step along
 *   sum_j w_ij (p_i - p_j) / |p_i - p_j|
 * with step 1 / sum_j w_ij. A step that lowers the node's weighted distance
 * sum is rejected, so the global objective never decreases. Coincident
 * neighbors contribute a seeded random unit direction instead.
 *
 * Deterministic in (g, options, seed).
 */
Embedding embed(const Graph& g, const EmbedOptions& options, std::uint64_t seed,
                const SweepObserver& observer = {});

/// sum over edges of w_ij * |p_i - p_j|_2.
double embedding_objective(const Graph& g, const Embedding& e);

/// Nearest node to i (Euclidean, ties by id) that is not i and not used.
/// Throws InvalidInstance when no candidate exists.
NodeId nearest_unpaired(const Embedding& e, NodeId i, const std::vector<bool>& used);

/// CSV with header "node_id,p_1,...,p_d".
void write_embedding_csv(std::ostream& out, const Embedding& e);

}  // namespace mlmc
