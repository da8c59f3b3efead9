#include "mlmc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "mlmc/error.hpp"
#include "mlmc/random.hpp"
#include "mlmc/solver_registry.hpp"
#include "mlmc/subproblem.hpp"

namespace mlmc {

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (subproblem_size < 2) fail("subproblem size K must be >= 2");
  if (multistarts < 1) fail("multistarts must be >= 1");
  if (no_improve_limit < 1) fail("no-improve limit must be >= 1");
  if (dim < 1) fail("embedding dimension must be >= 1");
  if (embed_sweeps < 1) fail("embedding sweeps must be >= 1");
  if (!(embed_tolerance >= 0.0)) fail("embedding tolerance must be >= 0");
  if (!(sparsify_fraction >= 0.0 && sparsify_fraction < 1.0)) fail("sparsify fraction must be in [0, 1)");
  if (!(coarsest_budget > 0.0)) fail("coarsest budget must be > 0");
  if (!(subproblem_budget > 0.0)) fail("subproblem budget must be > 0");
  if (qaoa.layers < 1) fail("QAOA layers must be >= 1");
  if (qaoa.starts < 1) fail("QAOA starts must be >= 1");
  if (qaoa.max_qubits < 1 || qaoa.max_qubits > 30) fail("QAOA qubit cap must be in [1, 30]");
  make_solver(solver, qaoa);
  if (solver == "exact" && subproblem_size > kExactMaxVariables) {
    fail("solver 'exact' supports K <= " + std::to_string(kExactMaxVariables) + ", got K = " +
         std::to_string(subproblem_size));
  }
  if (solver == "qaoa" && subproblem_size > qaoa.max_qubits) {
    fail("solver 'qaoa' needs K <= qubit cap (" + std::to_string(qaoa.max_qubits) + "), got K = " +
         std::to_string(subproblem_size));
  }
}

bool RunConfig::operator==(const RunConfig& o) const {
  return subproblem_size == o.subproblem_size && multistarts == o.multistarts && dim == o.dim &&
         embed_sweeps == o.embed_sweeps && embed_tolerance == o.embed_tolerance &&
         sparsify_fraction == o.sparsify_fraction && solver == o.solver && seed == o.seed &&
         coarsest_budget == o.coarsest_budget && subproblem_budget == o.subproblem_budget &&
         no_improve_limit == o.no_improve_limit && qaoa.layers == o.qaoa.layers &&
         qaoa.shots == o.qaoa.shots && qaoa.max_qubits == o.qaoa.max_qubits &&
         qaoa.starts == o.qaoa.starts && qaoa.evals_per_start == o.qaoa.evals_per_start;
}

HierarchyOptions hierarchy_options(const RunConfig& cfg) {
  HierarchyOptions h;
  h.subproblem_size = cfg.subproblem_size;
  h.embed.dim = cfg.dim;
  h.embed.max_sweeps = cfg.embed_sweeps;
  h.embed.tolerance = cfg.embed_tolerance;
  h.sparsify_fraction = cfg.sparsify_fraction;
  return h;
}

CutAssignment interpolate(const Graph& fine, const CutAssignment& coarse, const ContractionMap& map) {
  if (map.fine_to_coarse.size() != fine.num_nodes() || coarse.x.size() != map.num_coarse()) {
    throw ContractViolation("interpolation: map does not match the levels");
  }
  Bits x(fine.num_nodes());
  for (NodeId i = 0; i < fine.num_nodes(); ++i) x[i] = coarse.x[map.fine_to_coarse[i]];
  return make_assignment(fine, std::move(x));
}

RefineResult refine_level(const Graph& g, const CutAssignment& x0, const RunConfig& cfg,
                          const SubproblemSolver& solver, std::uint64_t seed,
                          const std::function<void(double, double)>& on_solver_call) {
  if (x0.x.size() != g.num_nodes()) throw ContractViolation("assignment does not match graph");

  const NodeId n = g.num_nodes();
  const std::size_t k = cfg.subproblem_size;
  const auto subset_size = static_cast<std::size_t>(std::min<double>(
      n, std::ceil(std::max(0.2 * n, 2.0 * static_cast<double>(k)))));

  RefineResult r;
  r.x = x0;
  GainTable gains = compute_gains(g, r.x.x);
  r.trace.push_back(r.x.objective);

  Rng rng(seed);
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  std::vector<NodeId> chosen;

  int stale = 0;
  while (stale < cfg.no_improve_limit) {
    ++r.iterations;
    // Partial Fisher-Yates: pool[0, subset_size) is a uniform random subset.
    for (std::size_t a = 0; a < subset_size; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, n - 1);
      std::swap(pool[a], pool[pick(rng)]);
    }
    chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(subset_size));
    const std::size_t take = std::min(k, chosen.size());
    auto by_gain = [&](NodeId a, NodeId b) {
      return gains.gain[a] != gains.gain[b] ? gains.gain[a] > gains.gain[b] : a < b;
    };
    std::partial_sort(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(take), chosen.end(), by_gain);
    chosen.resize(take);
    std::sort(chosen.begin(), chosen.end());

    Subproblem sp = build_subproblem(g, r.x, chosen);
    SolverRequest req{sp, restrict_to(sp, r.x), Budget{cfg.subproblem_budget, 0},
                      derive_seed(seed, {r.iterations})};
    const double warm = subproblem_objective(sp, req.warm_start);
    try {
      SolverResult res = solve_checked(solver, req);
      ++r.solves;
      if (on_solver_call) on_solver_call(warm, res.objective);
      const bool improved = res.objective > warm;
      merge_solution(g, r.x, gains, sp, res.y);
      stale = improved ? 0 : stale + 1;
    } catch (const SolverContractError& e) {
      ++r.failures;
      ++r.contract_violations;
      r.last_failure = e.what();
      ++stale;
    } catch (const std::exception& e) {
      ++r.failures;
      r.last_failure = e.what();
      ++stale;
    }
    r.trace.push_back(r.x.objective);
  }
  return r;
}

std::uint64_t instance_seed(std::uint64_t master, std::size_t level, int instance) {
  return derive_seed(master, {seed_tag::kRefine, level, static_cast<std::uint64_t>(instance)});
}

namespace {

unsigned resolve_threads(unsigned requested, int work) {
  unsigned t = requested > 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  return std::max(1U, std::min<unsigned>(t, static_cast<unsigned>(std::max(1, work))));
}

}  // namespace

MultistartResult multistart_refine(const Graph& g, const CutAssignment& x0, const RunConfig& cfg,
                                   const SubproblemSolver& solver, std::size_t level,
                                   const SolveOptions& options) {
  const int count = cfg.multistarts;
  std::vector<std::optional<RefineResult>> results(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  const SolveHooks* hooks = options.hooks;
  std::function<void(double, double)> on_call;
  if (hooks && hooks->on_solver_call) on_call = hooks->on_solver_call;

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        auto res = refine_level(g, x0, cfg, solver, instance_seed(cfg.seed, level, r), on_call);
        if (hooks && hooks->on_refine_trace) hooks->on_refine_trace(level, r, res.trace);
        results[static_cast<std::size_t>(r)] = std::move(res);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
      }
    }
  };

  const unsigned threads = resolve_threads(options.threads, count);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  MultistartResult m;
  m.instance_objectives.assign(static_cast<std::size_t>(count), -1.0);
  for (int r = 0; r < count; ++r) {
    auto& res = results[static_cast<std::size_t>(r)];
    if (!res) continue;
    m.instance_objectives[static_cast<std::size_t>(r)] = res->x.objective;
    m.total_solves += res->solves;
    m.total_failures += res->failures;
    if (m.best_instance < 0 || res->x.objective > m.best.x.objective) {
      m.best_instance = r;
      m.best = *res;
    }
  }
  if (m.best_instance < 0) {
    throw std::runtime_error("all " + std::to_string(count) + " refinement instances failed: " + errors[0]);
  }
  return m;
}

RunReport solve(const Graph& g, const RunConfig& cfg, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();

  auto stage = [](const char* name, auto&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(name) + ": " + e.what());
    }
  };

  const auto solver = make_solver(cfg.solver, cfg.qaoa);
  Hierarchy h = stage("coarsening", [&] { return build_hierarchy(g, hierarchy_options(cfg), cfg.seed); });
  const std::size_t levels = h.num_levels();

  RunReport report;
  report.config = cfg;
  report.coarsened = h.coarsened();
  report.threads = resolve_threads(options.threads, cfg.multistarts);
  report.per_level.resize(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const Graph& lg = h.levels[k];
    auto& lr = report.per_level[k];
    lr.level = k;
    lr.nodes = lg.num_nodes();
    lr.edges = lg.num_edges();
    lr.total_weight = lg.total_weight();
    lr.avg_degree = 2.0 * static_cast<double>(lr.edges) / lr.nodes;
    lr.density = lr.nodes > 1 ? 2.0 * static_cast<double>(lr.edges) /
                                    (static_cast<double>(lr.nodes) * (lr.nodes - 1))
                              : 0.0;
    if (k + 1 < levels) {
      lr.lost_weight = h.lost_weight[k];
      lr.sparsified_edges = h.sparsified_edges[k];
    }
  }

  // Coarsest level: pin-free subproblem over the whole graph.
  CutAssignment x = stage("coarsest solve", [&] {
    const Graph& coarsest = h.coarsest();
    Subproblem sp = whole_graph_subproblem(coarsest);
    const bool exact = coarsest.num_nodes() <= 20;
    report.coarsest_solver = exact ? "exact" : "tabu";
    SolverRequest req{sp, Bits(coarsest.num_nodes(), 0), Budget{cfg.coarsest_budget, 0},
                      derive_seed(cfg.seed, {seed_tag::kCoarsest})};
    const auto coarse_solver = make_solver(report.coarsest_solver);
    SolverResult res = solve_checked(*coarse_solver, req);
    if (options.hooks && options.hooks->on_solver_call) {
      options.hooks->on_solver_call(subproblem_objective(sp, req.warm_start), res.objective);
    }
    return make_assignment(coarsest, std::move(res.y));
  });
  report.coarsest_objective = x.objective;
  auto& top = report.per_level[levels - 1];
  top.coarse_objective = top.refined_objective = x.objective;
  top.subproblem_solves = 1;

  for (std::size_t k = levels - 1; k-- > 0;) {
    x = interpolate(h.levels[k], x, h.maps[k]);
    auto& lr = report.per_level[k];
    lr.coarse_objective = x.objective;
    MultistartResult m = stage("refinement", [&] {
      return multistart_refine(h.levels[k], x, cfg, *solver, k, options);
    });
    x = std::move(m.best.x);
    lr.refined_objective = x.objective;
    lr.iterations = m.best.iterations;
    lr.subproblem_solves = m.total_solves;
    lr.solver_failures = m.total_failures;
  }

  report.best_objective = cut_value(g, x.x);
  report.best_assignment = std::move(x.x);
  if (report.best_objective > 0.0) report.coarse_ratio = report.coarsest_objective / report.best_objective;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mlmc
