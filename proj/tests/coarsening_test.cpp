#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mlmc/coarsening.hpp"
#include "mlmc/error.hpp"
#include "mlmc/pipeline.hpp"
#include "test_util.hpp"

namespace mlmc {
namespace {

Embedding line(std::initializer_list<double> xs) {
  Embedding e(xs.size(), 1);
  std::size_t i = 0;
  for (double x : xs) e.row(i++)[0] = x;
  return e;
}

void expect_partition(const ContractionMap& m, NodeId n) {
  ASSERT_EQ(m.fine_to_coarse.size(), n);
  std::vector<int> preimages(m.num_coarse(), 0);
  for (NodeId c : m.fine_to_coarse) {
    ASSERT_LT(c, m.num_coarse());
    ++preimages[c];
  }
  int ones = 0;
  for (int p : preimages) {
    EXPECT_TRUE(p == 1 || p == 2);
    ones += p == 1;
  }
  EXPECT_EQ(ones, n % 2);
  EXPECT_EQ(m.num_coarse(), (n + 1) / 2);
  for (std::size_t q = 0; q < m.pairs.size(); ++q) {
    EXPECT_EQ(m.fine_to_coarse[m.pairs[q].first], q);
    EXPECT_EQ(m.fine_to_coarse[m.pairs[q].second], q);
  }
}

TEST(MatchPairs, TwoNodes) {
  Graph g(2, {{0, 1, 1.0}});
  Embedding e = embed(g, {}, 1);
  auto m = match_pairs(g, e, 3);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(std::min(m.pairs[0].first, m.pairs[0].second), 0u);
  EXPECT_EQ(std::max(m.pairs[0].first, m.pairs[0].second), 1u);
  EXPECT_FALSE(m.singleton);
  EXPECT_EQ(m.num_coarse(), 1u);
}

TEST(MatchPairs, ExplicitOrderWithSingleton) {
  Embedding e = line({0.0, 1.0, 0.2});
  const std::vector<NodeId> order{0, 1, 2};
  auto m = match_pairs_in_order(e, order);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0], (std::pair<NodeId, NodeId>{0, 2}));
  ASSERT_TRUE(m.singleton);
  EXPECT_EQ(*m.singleton, 1u);
  EXPECT_EQ(m.fine_to_coarse, (std::vector<NodeId>{0, 1, 0}));
}

TEST(MatchPairs, PartitionOnRandomGraphs) {
  std::mt19937_64 rng(100);
  for (NodeId n : {1u, 2u, 3u, 7u, 100u, 101u, 257u}) {
    Graph g = testing::random_real_graph(n, 0.1, 1.0, rng);
    Embedding e = embed(g, {}, rng());
    expect_partition(match_pairs(g, e, rng()), n);
  }
}

TEST(MatchPairs, Deterministic) {
  std::mt19937_64 rng(4);
  Graph g = testing::random_real_graph(90, 0.1, 1.0, rng);
  Embedding e = embed(g, {}, 2);
  auto a = match_pairs(g, e, 5);
  auto b = match_pairs(g, e, 5);
  EXPECT_EQ(a.fine_to_coarse, b.fine_to_coarse);
  EXPECT_EQ(a.pairs, b.pairs);
}

ContractionMap map_from_pairs(NodeId n, std::vector<std::pair<NodeId, NodeId>> pairs) {
  ContractionMap m;
  m.fine_to_coarse.assign(n, 0);
  m.pairs = std::move(pairs);
  std::vector<bool> seen(n, false);
  for (std::size_t q = 0; q < m.pairs.size(); ++q) {
    m.fine_to_coarse[m.pairs[q].first] = static_cast<NodeId>(q);
    m.fine_to_coarse[m.pairs[q].second] = static_cast<NodeId>(q);
    seen[m.pairs[q].first] = seen[m.pairs[q].second] = true;
  }
  for (NodeId i = 0; i < n; ++i) {
    if (!seen[i]) {
      m.singleton = i;
      m.fine_to_coarse[i] = static_cast<NodeId>(m.pairs.size());
    }
  }
  return m;
}

TEST(Contract, FourCycle) {
  Graph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
  auto c = contract(g, map_from_pairs(4, {{0, 1}, {2, 3}}));
  EXPECT_EQ(c.coarse.num_nodes(), 2u);
  ASSERT_EQ(c.coarse.num_edges(), 1u);
  EXPECT_EQ(c.coarse.edges()[0].w, 2.0);
  EXPECT_EQ(c.lost_weight, 2.0);
}

TEST(Contract, SingleEdgeAndEdgeless) {
  auto c = contract(Graph(2, {{0, 1, 2.5}}), map_from_pairs(2, {{0, 1}}));
  EXPECT_EQ(c.coarse.num_nodes(), 1u);
  EXPECT_EQ(c.coarse.num_edges(), 0u);
  EXPECT_EQ(c.lost_weight, 2.5);

  auto d = contract(Graph(5, {}), map_from_pairs(5, {{0, 3}, {4, 1}}));
  EXPECT_EQ(d.coarse.num_nodes(), 3u);
  EXPECT_EQ(d.coarse.num_edges(), 0u);
  EXPECT_EQ(d.lost_weight, 0.0);
}

TEST(Contract, MatchesDenseTripleProduct) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<NodeId> size(2, 12);
  for (int t = 0; t < 200; ++t) {
    const NodeId n = size(rng);
    Graph g = testing::random_real_graph(n, 0.5, 3.0, rng);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId k = 0; k + 1 < n; k += 2) pairs.emplace_back(perm[k], perm[k + 1]);
    auto m = map_from_pairs(n, pairs);
    auto c = contract(g, m);
    const NodeId nc = m.num_coarse();

    // Dense A (n x n), P (n x nc), Ac = P^T A P.
    std::vector<double> a(n * n, 0.0), p(n * nc, 0.0), ac(nc * nc, 0.0);
    for (const auto& e : g.edges()) a[e.u * n + e.v] = a[e.v * n + e.u] = e.w;
    for (NodeId i = 0; i < n; ++i) p[i * nc + m.fine_to_coarse[i]] = 1.0;
    for (NodeId r = 0; r < nc; ++r) {
      for (NodeId s = 0; s < nc; ++s) {
        double v = 0.0;
        for (NodeId i = 0; i < n; ++i) {
          for (NodeId j = 0; j < n; ++j) v += p[i * nc + r] * a[i * n + j] * p[j * nc + s];
        }
        ac[r * nc + s] = v;
      }
    }
    std::vector<double> got(nc * nc, 0.0);
    for (const auto& e : c.coarse.edges()) got[e.u * nc + e.v] = got[e.v * nc + e.u] = e.w;
    double diag = 0.0;
    for (NodeId r = 0; r < nc; ++r) {
      diag += ac[r * nc + r];
      ac[r * nc + r] = 0.0;
    }
    for (std::size_t k = 0; k < ac.size(); ++k) EXPECT_NEAR(got[k], ac[k], 1e-12);
    // Diagonal counts every intra-pair edge twice.
    EXPECT_NEAR(c.lost_weight, diag / 2.0, 1e-12);
  }
}

TEST(Sparsify, ZeroFractionIsIdentity) {
  std::mt19937_64 rng(6);
  Graph g = testing::random_real_graph(40, 0.2, 2.0, rng);
  Embedding e = embed(g, {}, 1);
  auto s = sparsify(g, e, 0.0);
  EXPECT_EQ(s.removed, 0u);
  ASSERT_EQ(s.graph.num_edges(), g.num_edges());
  for (EdgeId k = 0; k < g.num_edges(); ++k) {
    EXPECT_EQ(s.graph.edges()[k].u, g.edges()[k].u);
    EXPECT_EQ(s.graph.edges()[k].v, g.edges()[k].v);
    EXPECT_EQ(s.graph.edges()[k].w, g.edges()[k].w);
  }
}

TEST(Sparsify, PathMovesShortEdgeOntoLongNeighbor) {
  // a=0, b=1, c=2; |ab| = 0.5 < |bc| = 1.5
  Graph g(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  Embedding e = line({0.0, 0.5, 2.0});
  auto s = sparsify(g, e, 0.5);
  EXPECT_EQ(s.removed, 1u);
  ASSERT_EQ(s.graph.num_edges(), 1u);
  EXPECT_EQ(s.graph.edges()[0].u, 1u);
  EXPECT_EQ(s.graph.edges()[0].v, 2u);
  EXPECT_EQ(s.graph.edges()[0].w, 5.0);
}

TEST(Sparsify, IsolatedCandidateIsKept) {
  // Two disjoint edges: neither has an adjacent edge to take its weight.
  Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  Embedding e = line({0.0, 0.1, 0.5, 0.9});
  auto s = sparsify(g, e, 0.5);
  EXPECT_EQ(s.removed, 0u);
  EXPECT_EQ(s.kept_isolated, 1u);
  EXPECT_EQ(s.graph.num_edges(), 2u);
}

TEST(Sparsify, RejectsBadFraction) {
  Graph g(2, {{0, 1, 1.0}});
  Embedding e = line({0.0, 1.0});
  EXPECT_THROW(sparsify(g, e, 1.0), ContractViolation);
  EXPECT_THROW(sparsify(g, e, -0.1), ContractViolation);
}

TEST(Sparsify, PreservesTotalWeight) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    Graph g = testing::random_real_graph(60, 0.15, 5.0, rng);
    Embedding e = embed(g, {}, rng());
    for (double f : {0.1, 0.3, 0.6}) {
      auto s = sparsify(g, e, f);
      EXPECT_NEAR(s.graph.total_weight(), g.total_weight(), 1e-9);
      EXPECT_EQ(s.removed + s.kept_isolated, static_cast<std::size_t>(std::floor(f * static_cast<double>(g.num_edges()))));
      EXPECT_EQ(s.graph.num_edges(), g.num_edges() - s.removed);
    }
  }
}

TEST(Hierarchy, HalvingSizes) {
  std::mt19937_64 rng(1);
  Graph g = testing::random_gnm(800, 4000, rng);
  HierarchyOptions opts;
  opts.subproblem_size = 100;
  auto h = build_hierarchy(g, opts, 7);
  std::vector<NodeId> sizes;
  for (const auto& l : h.levels) sizes.push_back(l.num_nodes());
  EXPECT_EQ(sizes, (std::vector<NodeId>{800, 400, 200, 100, 50}));
  EXPECT_EQ(h.maps.size(), 4u);
  EXPECT_TRUE(h.coarsened());
}

TEST(Hierarchy, SmallGraphIsSingleLevel) {
  std::mt19937_64 rng(2);
  Graph g = testing::random_gnm(50, 200, rng);
  auto h = build_hierarchy(g, {}, 1);
  EXPECT_EQ(h.num_levels(), 1u);
  EXPECT_FALSE(h.coarsened());
  EXPECT_TRUE(h.maps.empty());
}

TEST(Hierarchy, OddSizesUseCeilHalf) {
  std::mt19937_64 rng(3);
  Graph g = testing::random_real_graph(301, 0.05, 1.0, rng);
  HierarchyOptions opts;
  opts.subproblem_size = 10;
  auto h = build_hierarchy(g, opts, 4);
  for (std::size_t k = 0; k + 1 < h.num_levels(); ++k) {
    EXPECT_EQ(h.levels[k + 1].num_nodes(), (h.levels[k].num_nodes() + 1) / 2);
    expect_partition(h.maps[k], h.levels[k].num_nodes());
  }
  EXPECT_LT(h.coarsest().num_nodes(), 10u);
}

TEST(Hierarchy, WeightLedger) {
  std::mt19937_64 rng(9);
  for (double f : {0.0, 0.1}) {
    for (int t = 0; t < 10; ++t) {
      Graph g = testing::random_real_graph(200, 0.05, 3.0, rng);
      HierarchyOptions opts;
      opts.subproblem_size = 12;
      opts.sparsify_fraction = f;
      auto h = build_hierarchy(g, opts, rng());
      for (std::size_t k = 0; k + 1 < h.num_levels(); ++k) {
        EXPECT_NEAR(h.contracted_weight[k], h.levels[k].total_weight(), 1e-9);
        EXPECT_NEAR(h.levels[k + 1].total_weight() + h.lost_weight[k], h.contracted_weight[k], 1e-9);
        if (f == 0.0) EXPECT_EQ(h.sparsified_edges[k], 0u);
      }
    }
  }
}

TEST(Hierarchy, InterpolationIsExact) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    Graph g = testing::random_int_graph(150, 0.06, 1, 10, rng);
    HierarchyOptions opts;
    opts.subproblem_size = 8;
    auto h = build_hierarchy(g, opts, rng());
    for (std::size_t k = 0; k + 1 < h.num_levels(); ++k) {
      auto xc = make_assignment(h.levels[k + 1], testing::random_bits(h.levels[k + 1].num_nodes(), rng));
      auto xf = interpolate(h.levels[k], xc, h.maps[k]);
      EXPECT_EQ(xf.objective, xc.objective);
      EXPECT_EQ(testing::qubo_cut(h.levels[k], xf.x), xc.objective);
    }
  }
}

TEST(Hierarchy, Deterministic) {
  std::mt19937_64 rng(5);
  Graph g = testing::random_real_graph(120, 0.1, 1.0, rng);
  HierarchyOptions opts;
  opts.subproblem_size = 10;
  opts.sparsify_fraction = 0.1;
  auto a = build_hierarchy(g, opts, 3);
  auto b = build_hierarchy(g, opts, 3);
  ASSERT_EQ(a.num_levels(), b.num_levels());
  for (std::size_t k = 0; k < a.num_levels(); ++k) {
    ASSERT_EQ(a.levels[k].num_edges(), b.levels[k].num_edges());
    for (EdgeId e = 0; e < a.levels[k].num_edges(); ++e) {
      EXPECT_EQ(a.levels[k].edges()[e].w, b.levels[k].edges()[e].w);
    }
  }
  for (std::size_t k = 0; k < a.maps.size(); ++k) EXPECT_EQ(a.maps[k].fine_to_coarse, b.maps[k].fine_to_coarse);
}

}  // namespace
}  // namespace mlmc
