#include <gtest/gtest.h>

#include "mlmc/error.hpp"
#include "mlmc/solver_registry.hpp"
#include "mlmc/solvers.hpp"
#include "test_util.hpp"

namespace mlmc {
namespace {

Graph triangle() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

// Single free variable with only a part-1 pin of weight 5.
Subproblem single_pinned() {
  Subproblem sp{{0}, Graph(1, {}), {0.0}, {5.0}, 0.0};
  return sp;
}

// A second enumerator, written against the subproblem definition directly.
double enumerate_subproblem(const Subproblem& sp) {
  const std::size_t k = sp.size();
  double best = -1.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
    double v = sp.constant;
    for (std::size_t i = 0; i < k; ++i) v += ((code >> i) & 1U) ? sp.bias0[i] : sp.bias1[i];
    for (const auto& e : sp.internal.edges()) {
      if (((code >> e.u) & 1U) != ((code >> e.v) & 1U)) v += e.w;
    }
    best = std::max(best, v);
  }
  return best;
}

Subproblem random_pinned(NodeId n, std::size_t k, std::mt19937_64& rng) {
  Graph g = testing::random_int_graph(n, 0.4, 1, 10, rng);
  auto x = make_assignment(g, testing::random_bits(n, rng));
  std::vector<NodeId> chosen(n);
  std::iota(chosen.begin(), chosen.end(), 0);
  std::shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(k);
  std::sort(chosen.begin(), chosen.end());
  // build_subproblem copies what it needs, so the graph may go out of scope.
  return build_subproblem(g, x, chosen);
}

TEST(Exact, SmallExamples) {
  auto tri = whole_graph_subproblem(triangle());
  EXPECT_EQ(solve_exact({tri, {0, 0, 0}}).objective, 2.0);
  auto c4 = whole_graph_subproblem(Graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}}));
  auto r = solve_exact({c4, {0, 0, 0, 0}});
  EXPECT_EQ(r.objective, 4.0);
  EXPECT_EQ(r.y, (Bits{1, 0, 1, 0}));  // codes 5 and 10 tie; 5 is smaller
  EXPECT_EQ(r.solver_name, "exact");
}

TEST(Exact, TiesGoToSmallestBinaryValue) {
  // Triangle optima: every assignment with one or two ones. Smallest code is y=(1,0,0).
  auto tri = whole_graph_subproblem(triangle());
  EXPECT_EQ(solve_exact({tri, {0, 0, 0}}).y, (Bits{1, 0, 0}));
}

TEST(Exact, MatchesIndependentEnumerator) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    Subproblem sp = random_pinned(20, 12, rng);
    auto r = solve_exact({sp, Bits(12, 0)});
    EXPECT_EQ(r.objective, enumerate_subproblem(sp));
    EXPECT_EQ(r.objective, subproblem_objective(sp, r.y));
  }
  for (int t = 0; t < 10; ++t) {
    Graph g = testing::random_int_graph(12, 0.5, 1, 10, rng);
    auto r = solve_exact({whole_graph_subproblem(g), Bits(12, 0)});
    EXPECT_EQ(r.objective, testing::brute_force_max_cut(g));
  }
}

TEST(Exact, CapacityError) {
  Graph g = testing::random_gnm(23, 30, *std::make_unique<std::mt19937_64>(1));
  auto sp = whole_graph_subproblem(g);
  EXPECT_THROW(solve_exact({sp, Bits(23, 0)}), CapacityError);
}

TEST(Tabu, PinnedSingleVariable) {
  auto sp = single_pinned();
  // y=0 sits in part 0 and cuts the edge to the part-1 pin.
  EXPECT_EQ(subproblem_objective(sp, Bits{0}), 5.0);
  EXPECT_EQ(subproblem_objective(sp, Bits{1}), 0.0);
  auto r = solve_tabu({sp, {1}, {0.1, 0}, 1});
  EXPECT_EQ(r.y, (Bits{0}));
  EXPECT_EQ(r.objective, 5.0);
  auto kept = solve_tabu({sp, {0}, {0.1, 0}, 1});
  EXPECT_EQ(kept.y, (Bits{0}));
  EXPECT_EQ(kept.objective, 5.0);
}

TEST(Tabu, Triangle) {
  auto tri = whole_graph_subproblem(triangle());
  auto r = solve_tabu({tri, {0, 0, 0}, {0.1, 0}, 3});
  EXPECT_EQ(r.objective, 2.0);
  EXPECT_EQ(r.objective, solve_exact({tri, {0, 0, 0}}).objective);
}

TEST(Tabu, MatchesExactOnSmallInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<NodeId> size(4, 16);
  int hits = 0;
  for (int t = 0; t < 100; ++t) {
    const NodeId n = size(rng);
    Graph g = testing::random_int_graph(n, 0.4, 1, 10, rng);
    auto sp = whole_graph_subproblem(g);
    Bits warm = testing::random_bits(n, rng);
    // 0.01 s: a prefix of the 1 s trajectory, so best-so-far can only be lower.
    auto r = solve_tabu({sp, warm, {0.01, 0}, rng()});
    if (r.objective == testing::brute_force_max_cut(g)) ++hits;
  }
  RecordProperty("tabu_exact_hits", hits);
  EXPECT_GE(hits, 95);
}

TEST(Tabu, Deterministic) {
  std::mt19937_64 rng(8);
  Subproblem sp = random_pinned(60, 40, rng);
  Bits warm = testing::random_bits(40, rng);
  auto a = solve_tabu({sp, warm, {0, 20000}, 99});
  auto b = solve_tabu({sp, warm, {0, 20000}, 99});
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.evaluations, b.evaluations);
  auto e1 = solve_exact({sp = random_pinned(20, 10, rng), Bits(10, 0)});
  auto e2 = solve_exact({sp, Bits(10, 0)});
  EXPECT_EQ(e1.y, e2.y);
}

TEST(Tabu, StepBudgetScalesWithTime) {
  std::mt19937_64 rng(9);
  Subproblem sp = random_pinned(120, 100, rng);
  EXPECT_GT(tabu_steps_for(1.0, sp), tabu_steps_for(0.1, sp));
  EXPECT_GE(tabu_steps_for(1e-12, sp), 1u);
}

TEST(Solvers, RejectBadRequests) {
  auto tri = whole_graph_subproblem(triangle());
  EXPECT_THROW(solve_tabu({tri, {0, 0}}), ContractViolation);
  EXPECT_THROW(solve_tabu({tri, {0, 0, 0}, {0.0, 0}}), ContractViolation);
}

TEST(Solvers, NeverWorseThanWarmStart) {
  std::mt19937_64 rng(10);
  for (const auto& name : available_solvers()) {
    auto solver = make_solver(name, {1, 64, 16, 2, 20});
    for (int t = 0; t < 10; ++t) {
      Subproblem sp = random_pinned(30, 10, rng);
      Bits warm = testing::random_bits(10, rng);
      auto r = solve_checked(*solver, {sp, warm, {0, 50}, rng()});
      EXPECT_GE(r.objective, subproblem_objective(sp, warm)) << name;
      EXPECT_EQ(r.objective, subproblem_objective(sp, r.y));
    }
  }
}

class LyingSolver : public SubproblemSolver {
 public:
  explicit LyingSolver(int mode) : mode_(mode) {}
  std::string_view name() const override { return "liar"; }
  SolverResult solve(const SolverRequest& req) const override {
    SolverResult r;
    r.y = req.warm_start;
    r.solver_name = "liar";
    if (mode_ == 0) {
      r.objective = subproblem_objective(req.subproblem, r.y) + 1.0;
    } else if (mode_ == 1) {
      for (auto& b : r.y) b ^= 1;
      r.y[0] ^= 1;
      r.objective = subproblem_objective(req.subproblem, r.y);
    } else {
      r.y.pop_back();
    }
    return r;
  }

 private:
  int mode_;
};

TEST(SolveChecked, RejectsContractBreaches) {
  // Path 0-1-2 with the middle node flipped: warm (0,1,0) cuts both edges.
  auto sp = whole_graph_subproblem(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  SolverRequest req{sp, {0, 1, 0}};
  EXPECT_THROW(solve_checked(LyingSolver(0), req), SolverContractError);
  EXPECT_THROW(solve_checked(LyingSolver(1), req), SolverContractError);
  EXPECT_THROW(solve_checked(LyingSolver(2), req), SolverContractError);
}

TEST(Registry, NamesAndErrors) {
  EXPECT_EQ(available_solvers(), (std::vector<std::string>{"exact", "tabu", "qaoa"}));
  for (const auto& n : available_solvers()) EXPECT_EQ(make_solver(n)->name(), n);
  try {
    make_solver("gurobi");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("exact, tabu, qaoa"), std::string::npos) << e.what();
  }
}

TEST(Registry, QaoaFallsBackToTabuAboveCap) {
  std::mt19937_64 rng(11);
  Subproblem sp = random_pinned(30, 20, rng);
  auto q = make_solver("qaoa", {1, 16, 8, 1, 5});
  Bits warm(20, 0);
  auto r = solve_checked(*q, {sp, warm, {0, 500}, 4});
  auto t = solve_tabu({sp, warm, {0, 500}, 4});
  EXPECT_EQ(r.solver_name, "tabu");
  EXPECT_EQ(r.y, t.y);
}

}  // namespace
}  // namespace mlmc
