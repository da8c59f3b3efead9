#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "mlmc/subproblem.hpp"
#include "test_util.hpp"

namespace mlmc {
namespace {

Graph path3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

std::vector<NodeId> random_subset(NodeId n, std::size_t k, std::mt19937_64& rng) {
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

Bits merged(const Subproblem& sp, Bits x, const Bits& y) {
  for (std::size_t i = 0; i < sp.size(); ++i) x[sp.free_nodes[i]] = y[i];
  return x;
}

TEST(BuildSubproblem, AllNodesChosen) {
  std::mt19937_64 rng(1);
  Graph g = testing::random_real_graph(10, 0.4, 2.0, rng);
  auto x = make_assignment(g, testing::random_bits(10, rng));
  std::vector<NodeId> all(10);
  std::iota(all.begin(), all.end(), 0);
  auto sp = build_subproblem(g, x, all);
  EXPECT_EQ(sp.constant, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(sp.bias0[i], 0.0);
    EXPECT_EQ(sp.bias1[i], 0.0);
  }
  EXPECT_EQ(sp.internal.num_edges(), g.num_edges());
  EXPECT_NEAR(sp.internal.total_weight(), g.total_weight(), 1e-12);
}

TEST(BuildSubproblem, PathMiddleNode) {
  auto x = make_assignment(path3(), {0, 0, 1});
  const std::vector<NodeId> chosen{1};
  auto sp = build_subproblem(path3(), x, chosen);
  ASSERT_EQ(sp.size(), 1u);
  EXPECT_EQ(sp.bias0[0], 1.0);
  EXPECT_EQ(sp.bias1[0], 1.0);
  EXPECT_EQ(sp.constant, 0.0);
  EXPECT_EQ(sp.internal.num_edges(), 0u);
  EXPECT_EQ(subproblem_objective(sp, Bits{0}), 1.0);
  EXPECT_EQ(subproblem_objective(sp, Bits{1}), 1.0);
}

TEST(BuildSubproblem, MergedObjectiveMatchesCutValue) {
  std::mt19937_64 rng(200);
  std::uniform_int_distribution<NodeId> size(2, 60);
  for (int t = 0; t < 200; ++t) {
    const NodeId n = size(rng);
    Graph g = testing::random_real_graph(n, 0.2, 4.0, rng);
    auto x = make_assignment(g, testing::random_bits(n, rng));
    std::uniform_int_distribution<std::size_t> ksize(1, n);
    auto chosen = random_subset(n, ksize(rng), rng);
    auto sp = build_subproblem(g, x, chosen);

    EXPECT_GE(sp.constant, 0.0);
    std::vector<bool> is_free(n, false);
    for (NodeId v : chosen) is_free[v] = true;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      double outside = 0.0;
      for (const auto& e : g.edges()) {
        if (e.u == sp.free_nodes[i] && !is_free[e.v]) outside += e.w;
        if (e.v == sp.free_nodes[i] && !is_free[e.u]) outside += e.w;
      }
      EXPECT_NEAR(sp.bias0[i] + sp.bias1[i], outside, 1e-9);
    }
    EXPECT_EQ(restrict_to(sp, x).size(), sp.size());
    EXPECT_NEAR(subproblem_objective(sp, restrict_to(sp, x)), x.objective, 1e-9);
    for (int r = 0; r < 5; ++r) {
      Bits y = testing::random_bits(sp.size(), rng);
      EXPECT_NEAR(subproblem_objective(sp, y), testing::qubo_cut(g, merged(sp, x.x, y)), 1e-9);
    }
  }
}

TEST(SubproblemGains, MatchFlipDifference) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    Graph g = testing::random_int_graph(30, 0.2, 1, 5, rng);
    auto x = make_assignment(g, testing::random_bits(30, rng));
    auto sp = build_subproblem(g, x, random_subset(30, 10, rng));
    Bits y = testing::random_bits(10, rng);
    auto gains = subproblem_gains(sp, y);
    for (std::size_t i = 0; i < 10; ++i) {
      Bits z = y;
      z[i] ^= 1;
      EXPECT_EQ(gains[i], subproblem_objective(sp, z) - subproblem_objective(sp, y));
    }
  }
}

TEST(MergeSolution, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(4);
  Graph g = testing::random_real_graph(25, 0.3, 1.0, rng);
  auto x = make_assignment(g, testing::random_bits(25, rng));
  auto gains = compute_gains(g, x.x);
  auto sp = build_subproblem(g, x, random_subset(25, 8, rng));
  const auto before = x;
  const auto gains_before = gains.gain;
  merge_solution(g, x, gains, sp, restrict_to(sp, x));
  EXPECT_EQ(x.x, before.x);
  EXPECT_EQ(x.objective, before.objective);
  EXPECT_EQ(gains.gain, gains_before);
}

TEST(MergeSolution, PathExample) {
  auto x = make_assignment(path3(), {0, 0, 1});
  auto gains = compute_gains(path3(), x.x);
  const std::vector<NodeId> chosen{1};
  auto sp = build_subproblem(path3(), x, chosen);
  merge_solution(path3(), x, gains, sp, Bits{1});
  EXPECT_EQ(x.x, (Bits{0, 1, 1}));
  EXPECT_EQ(x.objective, 1.0);
  EXPECT_EQ(gains.gain, compute_gains(path3(), x.x).gain);
}

TEST(MergeSolution, RandomMatchesRecomputation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Graph g = testing::random_real_graph(40, 0.15, 3.0, rng);
    auto x = make_assignment(g, testing::random_bits(40, rng));
    auto gains = compute_gains(g, x.x);
    auto sp = build_subproblem(g, x, random_subset(40, 12, rng));
    Bits y = testing::random_bits(12, rng);
    const double predicted = subproblem_objective(sp, y);
    merge_solution(g, x, gains, sp, y);
    EXPECT_NEAR(x.objective, predicted, 1e-9);
    EXPECT_NEAR(x.objective, testing::qubo_cut(g, x.x), 1e-9);
    auto ref = compute_gains(g, x.x);
    for (NodeId i = 0; i < 40; ++i) EXPECT_NEAR(gains.gain[i], ref.gain[i], 1e-9);
  }
}

TEST(WholeGraphSubproblem, HasNoPins) {
  Graph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto sp = whole_graph_subproblem(g);
  EXPECT_EQ(sp.size(), 3u);
  EXPECT_EQ(sp.constant, 0.0);
  EXPECT_EQ(subproblem_objective(sp, Bits{0, 1, 1}), 2.0);
}

// Parses the QUBO dump and evaluates it independently.
double eval_qubo_text(const std::string& text, const Bits& y) {
  std::istringstream in(text);
  std::string line;
  double v = 0.0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "offset") {
      double c;
      ls >> c;
      v += c;
    } else if (kind == "linear") {
      std::size_t i;
      double a;
      ls >> i >> a;
      v += a * y[i];
    } else if (kind == "quadratic") {
      std::size_t i, j;
      double b;
      ls >> i >> j >> b;
      v += b * y[i] * y[j];
    }
  }
  return v;
}

TEST(WriteQubo, EvaluatesToSubproblemObjective) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    Graph g = testing::random_int_graph(20, 0.3, 1, 9, rng);
    auto x = make_assignment(g, testing::random_bits(20, rng));
    auto sp = build_subproblem(g, x, random_subset(20, 7, rng));
    std::ostringstream out;
    write_qubo(out, sp);
    for (int r = 0; r < 10; ++r) {
      Bits y = testing::random_bits(7, rng);
      EXPECT_NEAR(eval_qubo_text(out.str(), y), subproblem_objective(sp, y), 1e-9);
    }
  }
}

}  // namespace
}  // namespace mlmc
