#include "mlmc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlmc/error.hpp"

namespace mlmc {

Graph::Graph(NodeId num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
  if (num_nodes == 0) throw InvalidInstance("graph has no nodes");

  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw ContractViolation("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                              std::to_string(e.v) + ") with n = " + std::to_string(num_nodes));
    }
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw InvalidInstance("edge weight must be finite and nonnegative");
    }
    if (e.u == e.v) {
      ++self_loops_dropped_;
      continue;
    }
    kept.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  edges_.reserve(kept.size());
  for (const auto& e : kept) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().w += e.w;
      ++duplicates_merged_;
    } else {
      edges_.push_back(e);
    }
  }

  offsets_.assign(num_nodes_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (NodeId i = 0; i < num_nodes_; ++i) offsets_[i + 1] += offsets_[i];

  adjacency_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    adjacency_[cursor[e.u]++] = {e.v, e.w, id};
    adjacency_[cursor[e.v]++] = {e.u, e.w, id};
    total_weight_ += e.w;
  }
}

double Graph::weighted_degree(NodeId i) const noexcept {
  double s = 0.0;
  for (const auto& nb : neighbors(i)) s += nb.weight;
  return s;
}

namespace {

void check_length(const Graph& g, std::size_t size) {
  if (size != g.num_nodes()) {
    throw ContractViolation("assignment length " + std::to_string(size) +
                            " does not match node count " + std::to_string(g.num_nodes()));
  }
}

}  // namespace

double cut_value(const Graph& g, std::span<const std::uint8_t> x) {
  check_length(g, x.size());
  double cut = 0.0;
  for (const auto& e : g.edges()) {
    if (x[e.u] != x[e.v]) cut += e.w;
  }
  return cut;
}

GainTable compute_gains(const Graph& g, std::span<const std::uint8_t> x) {
  check_length(g, x.size());
  GainTable t;
  t.gain.assign(g.num_nodes(), 0.0);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double s = 0.0;
    for (const auto& nb : g.neighbors(i)) s += x[i] == x[nb.node] ? nb.weight : -nb.weight;
    t.gain[i] = s;
  }
  return t;
}

CutAssignment make_assignment(const Graph& g, Bits x) {
  CutAssignment a;
  a.objective = cut_value(g, x);
  a.x = std::move(x);
  return a;
}

void apply_flip(const Graph& g, CutAssignment& a, GainTable& gains, NodeId i) {
  auto& gain = gains.gain;
  a.objective += gain[i];
  gain[i] = -gain[i];
  const auto xi = a.x[i];
  for (const auto& nb : g.neighbors(i)) {
    // Same part before the flip: the edge enters the cut.
    if (a.x[nb.node] == xi) {
      gain[nb.node] -= 2.0 * nb.weight;
    } else {
      gain[nb.node] += 2.0 * nb.weight;
    }
  }
  a.x[i] = static_cast<std::uint8_t>(xi ^ 1U);
}

}  // namespace mlmc
