#include "mlmc/coarsening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlmc/error.hpp"
#include "mlmc/kdtree.hpp"
#include "mlmc/random.hpp"

namespace mlmc {

ContractionMap match_pairs_in_order(const Embedding& e, std::span<const NodeId> order) {
  const std::size_t n = e.num_nodes();
  if (order.size() != n) throw ContractViolation("visit order must be a permutation of all nodes");

  ContractionMap m;
  m.fine_to_coarse.assign(n, 0);
  m.pairs.reserve(n / 2);
  KdTree tree(e.data(), e.dim());
  std::vector<bool> used(n, false);

  for (NodeId i : order) {
    if (used[i]) continue;
    used[i] = true;
    tree.deactivate(i);
    auto j = tree.nearest_active(e.row(i));
    if (!j) {
      m.singleton = i;
      continue;
    }
    used[*j] = true;
    tree.deactivate(*j);
    m.pairs.emplace_back(i, *j);
  }

  NodeId q = 0;
  for (const auto& [a, b] : m.pairs) {
    m.fine_to_coarse[a] = q;
    m.fine_to_coarse[b] = q;
    ++q;
  }
  if (m.singleton) m.fine_to_coarse[*m.singleton] = q;
  return m;
}

ContractionMap match_pairs(const Graph& g, const Embedding& e, std::uint64_t seed) {
  if (e.num_nodes() != g.num_nodes()) throw ContractViolation("embedding does not match graph");
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return match_pairs_in_order(e, order);
}

Contraction contract(const Graph& fine, const ContractionMap& map) {
  if (map.fine_to_coarse.size() != fine.num_nodes()) {
    throw ContractViolation("contraction map does not match graph");
  }
  std::vector<Edge> coarse_edges;
  coarse_edges.reserve(fine.num_edges());
  double lost = 0.0;
  for (const auto& e : fine.edges()) {
    NodeId cu = map.fine_to_coarse[e.u];
    NodeId cv = map.fine_to_coarse[e.v];
    if (cu == cv) {
      lost += e.w;
    } else {
      coarse_edges.push_back({cu, cv, e.w});
    }
  }
  return {Graph(map.num_coarse(), std::move(coarse_edges)), lost};
}

SparsifyResult sparsify(const Graph& g, const Embedding& e, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ContractViolation("sparsify fraction must be in [0, 1)");
  const std::size_t m = g.num_edges();
  const auto quota = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m)));
  if (quota == 0) return {g, 0, 0};

  std::vector<double> length(m), weighted(m);
  for (EdgeId id = 0; id < m; ++id) {
    const auto& edge = g.edge(id);
    double s = 0.0;
    auto pu = e.row(edge.u);
    auto pv = e.row(edge.v);
    for (std::size_t c = 0; c < e.dim(); ++c) s += (pu[c] - pv[c]) * (pu[c] - pv[c]);
    length[id] = std::sqrt(s);
    weighted[id] = edge.w * length[id];
  }

  std::vector<EdgeId> by_length(m);
  std::iota(by_length.begin(), by_length.end(), EdgeId{0});
  std::stable_sort(by_length.begin(), by_length.end(),
                   [&](EdgeId a, EdgeId b) { return weighted[a] < weighted[b]; });

  std::vector<double> weight(m);
  for (EdgeId id = 0; id < m; ++id) weight[id] = g.edge(id).w;
  std::vector<bool> removed(m, false);

  SparsifyResult result;
  for (std::size_t k = 0; k < quota; ++k) {
    const EdgeId cand = by_length[k];
    const auto& edge = g.edge(cand);
    std::optional<EdgeId> target;
    for (NodeId end : {edge.u, edge.v}) {
      for (const auto& nb : g.neighbors(end)) {
        if (nb.edge == cand || removed[nb.edge]) continue;
        if (!target || length[nb.edge] > length[*target] ||
            (length[nb.edge] == length[*target] && nb.edge < *target)) {
          target = nb.edge;
        }
      }
    }
    if (!target) {
      ++result.kept_isolated;
      continue;
    }
    weight[*target] += weight[cand];
    weight[cand] = 0.0;
    removed[cand] = true;
    ++result.removed;
  }

  std::vector<Edge> kept;
  kept.reserve(m - result.removed);
  for (EdgeId id = 0; id < m; ++id) {
    if (!removed[id]) kept.push_back({g.edge(id).u, g.edge(id).v, weight[id]});
  }
  result.graph = Graph(g.num_nodes(), std::move(kept));
  return result;
}

Hierarchy build_hierarchy(const Graph& g, const HierarchyOptions& options, std::uint64_t seed) {
  if (options.subproblem_size < 2) throw ContractViolation("subproblem size must be >= 2");

  Hierarchy h;
  h.levels.push_back(g);
  for (std::uint64_t level = 0; h.levels.back().num_nodes() >= options.subproblem_size; ++level) {
    const Graph& fine = h.levels.back();
    Embedding e = embed(fine, options.embed, derive_seed(seed, {level, seed_tag::kEmbed}));

    std::optional<Graph> sparse;
    std::size_t removed = 0;
    if (options.sparsify_fraction > 0.0) {
      auto s = sparsify(fine, e, options.sparsify_fraction);
      removed = s.removed;
      sparse = std::move(s.graph);
    }
    const Graph& source = sparse ? *sparse : fine;

    ContractionMap map = match_pairs(source, e, derive_seed(seed, {level, seed_tag::kMatch}));
    Contraction c = contract(source, map);

    h.contracted_weight.push_back(source.total_weight());
    h.sparsified_edges.push_back(removed);
    h.lost_weight.push_back(c.lost_weight);
    h.maps.push_back(std::move(map));
    h.embeddings.push_back(std::move(e));
    h.levels.push_back(std::move(c.coarse));
  }
  return h;
}

}  // namespace mlmc
