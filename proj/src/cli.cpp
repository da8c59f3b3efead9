#include "mlmc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mlmc/embedding.hpp"
#include "mlmc/error.hpp"
#include "mlmc/random.hpp"
#include "mlmc/report.hpp"

namespace mlmc::cli {

namespace {

// --k default when --solver qaoa and no --k is given.
constexpr NodeId kQaoaDefaultK = 12;

struct Flags {
  CliInvocation inv;
  std::string format;
  std::string out, partition_out, dump_embedding;
  bool verbose = false;
  bool quiet = false;
  CLI::Option* k_opt = nullptr;
};

void add_run_flags(CLI::App& sub, Flags& f) {
  auto& c = f.inv.config;
  f.k_opt = sub.add_option("--k", c.subproblem_size, "Subproblem size K")->capture_default_str();
  sub.add_option("--multistarts", c.multistarts, "Parallel refinement instances per level")->capture_default_str();
  sub.add_option("--dim", c.dim, "Embedding dimension")->capture_default_str();
  sub.add_option("--embed-sweeps", c.embed_sweeps, "Maximum embedding sweeps")->capture_default_str();
  sub.add_option("--embed-tol", c.embed_tolerance, "Embedding displacement tolerance")->capture_default_str();
  sub.add_option("--sparsify", c.sparsify_fraction, "Fraction of edges sparsified per level")->capture_default_str();
  sub.add_option("--solver", c.solver, "Subproblem solver: exact, tabu or qaoa")->capture_default_str();
  sub.add_option("--seed", c.seed, "Master RNG seed")->capture_default_str();
  sub.add_option("--coarsest-budget", c.coarsest_budget, "Coarsest-level solve budget (seconds)")->capture_default_str();
  sub.add_option("--sub-budget", c.subproblem_budget, "Per-subproblem solve budget (seconds)")->capture_default_str();
  sub.add_option("--no-improve-limit", c.no_improve_limit, "Non-improving iterations before a level stops")->capture_default_str();
  sub.add_option("--qaoa-p", c.qaoa.layers, "QAOA depth")->capture_default_str();
  sub.add_option("--qaoa-shots", c.qaoa.shots, "QAOA measurement shots")->capture_default_str();
  sub.add_option("--qaoa-max-qubits", c.qaoa.max_qubits, "QAOA simulator qubit cap")->capture_default_str();
  sub.add_option("--qaoa-starts", c.qaoa.starts, "QAOA angle optimizer restarts")->capture_default_str();
  sub.add_option("--qaoa-evals", c.qaoa.evals_per_start, "QAOA evaluations per restart (0 = 200*p)")->capture_default_str();
  sub.add_option("--format", f.format, "Input format: edgelist or mtx (default: by extension)");
  sub.add_option("--out", f.out, "Output path (JSON report for solve, CSV for bench)");
  sub.add_flag("-v,--verbose", f.verbose, "Per-level statistics on stderr");
  sub.add_flag("-q,--quiet", f.quiet, "No summary line");
}

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_ratio(const std::optional<double>& r) {
  if (!r) return "n/a";
  std::ostringstream s;
  s << std::setprecision(6) << *r;
  return s.str();
}

void print_levels(std::ostream& err, const RunReport& report) {
  err << "level  nodes  edges  avg_deg  lost_weight  coarse_obj  refined_obj  iters  solves\n";
  for (const auto& l : report.per_level) {
    err << std::setw(5) << l.level << std::setw(7) << l.nodes << std::setw(7) << l.edges << std::setw(9)
        << std::setprecision(4) << l.avg_degree << std::setw(13) << l.lost_weight << std::setw(12)
        << l.coarse_objective << std::setw(13) << l.refined_objective << std::setw(7) << l.iterations
        << std::setw(8) << l.subproblem_solves << '\n';
  }
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  return f;
}

int run_solve(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  LoadedGraph loaded;
  try {
    loaded = load_graph(inv.input, inv.format);
  } catch (const std::exception& e) {
    err << "error: loading graph: " << e.what() << '\n';
    return 1;
  }
  if (loaded.self_loops_dropped > 0 && inv.verbosity > 0) {
    err << "warning: dropped " << loaded.self_loops_dropped << " self-loop(s)\n";
  }

  RunReport report;
  try {
    report = solve(loaded.graph, inv.config, SolveOptions{threads_from_env(), nullptr});
  } catch (const std::exception& e) {
    err << "error: solve: " << e.what() << '\n';
    return 1;
  }

  try {
    const auto json = report_to_json(report).dump(2);
    if (inv.out) {
      auto f = open_out(*inv.out);
      f << json << '\n';
    } else {
      out << json << '\n';
    }
    if (inv.partition_out) {
      auto f = open_out(*inv.partition_out);
      write_partition(f, report.best_assignment, loaded.labels);
    }
    if (inv.dump_embedding) {
      const auto h = hierarchy_options(inv.config);
      Embedding e = embed(loaded.graph, h.embed, derive_seed(inv.config.seed, {0, seed_tag::kEmbed}));
      auto f = open_out(*inv.dump_embedding);
      write_embedding_csv(f, e);
    }
  } catch (const std::exception& e) {
    err << "error: writing output: " << e.what() << '\n';
    return 1;
  }

  if (inv.verbosity > 1) print_levels(err, report);
  if (inv.verbosity > 0) {
    std::ostream& summary = inv.out ? out : err;
    summary << "objective=" << number(report.best_objective)
            << " coarse_ratio=" << format_ratio(report.coarse_ratio) << " wall_time=" << std::fixed
            << std::setprecision(3) << report.wall_time << "s" << std::defaultfloat << '\n';
  }
  return 0;
}

bool is_graph_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".mtx" || ext == ".txt" || ext == ".edges" || ext == ".el" || ext == ".edgelist";
}

int run_bench(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!std::filesystem::is_directory(inv.input, ec)) {
    err << "error: bench: '" << inv.input.string() << "' is not a directory\n";
    return 1;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(inv.input)) {
    if (entry.is_regular_file() && is_graph_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::ofstream file;
  if (inv.out) file = open_out(*inv.out);
  std::ostream& csv = inv.out ? static_cast<std::ostream&>(file) : out;
  csv << "name,nodes,edges,objective,coarse_ratio,time\n";

  int status = 0;
  for (const auto& path : files) {
    try {
      auto loaded = load_graph(path, inv.format);
      auto report = solve(loaded.graph, inv.config, SolveOptions{threads_from_env(), nullptr});
      csv << path.filename().string() << ',' << loaded.graph.num_nodes() << ','
          << loaded.graph.num_edges() << ',' << number(report.best_objective) << ','
          << (report.coarse_ratio ? number(*report.coarse_ratio) : std::string()) << ','
          << number(report.wall_time) << '\n';
      if (inv.verbosity > 0) {
        err << path.filename().string() << ": objective=" << number(report.best_objective) << '\n';
      }
    } catch (const std::exception& e) {
      err << "error: " << path.filename().string() << ": " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

}  // namespace

CliInvocation parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Multilevel Max-Cut solver", "mlmc"};
  app.require_subcommand(1);

  Flags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one graph and write a JSON report");
  solve_cmd->add_option("graph", solve_flags.inv.input, "Graph file")->required();
  add_run_flags(*solve_cmd, solve_flags);
  solve_cmd->add_option("--partition-out", solve_flags.partition_out, "Write '<label> <part>' lines here");
  solve_cmd->add_option("--dump-embedding", solve_flags.dump_embedding, "Write the level-0 embedding as CSV");

  Flags bench_flags;
  bench_flags.inv.command = Command::kBench;
  auto* bench_cmd = app.add_subcommand("bench", "Solve every graph in a directory; CSV summary");
  bench_cmd->add_option("dir", bench_flags.inv.input, "Directory of graph files")->required();
  add_run_flags(*bench_cmd, bench_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help(), 2);
  }

  Flags& f = solve_cmd->parsed() ? solve_flags : bench_flags;
  CliInvocation inv = f.inv;
  if (inv.config.solver == "qaoa" && f.k_opt->count() == 0) inv.config.subproblem_size = kQaoaDefaultK;
  try {
    if (!f.format.empty()) inv.format = parse_graph_format(f.format);
    inv.config.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what(), 2);
  }
  if (!f.out.empty()) inv.out = f.out;
  if (!f.partition_out.empty()) inv.partition_out = f.partition_out;
  if (!f.dump_embedding.empty()) inv.dump_embedding = f.dump_embedding;
  inv.verbosity = f.quiet ? 0 : (f.verbose ? 2 : 1);
  return inv;
}

std::vector<std::string> config_to_args(const RunConfig& c) {
  return {
      "--k", std::to_string(c.subproblem_size),
      "--multistarts", std::to_string(c.multistarts),
      "--dim", std::to_string(c.dim),
      "--embed-sweeps", std::to_string(c.embed_sweeps),
      "--embed-tol", number(c.embed_tolerance),
      "--sparsify", number(c.sparsify_fraction),
      "--solver", c.solver,
      "--seed", std::to_string(c.seed),
      "--coarsest-budget", number(c.coarsest_budget),
      "--sub-budget", number(c.subproblem_budget),
      "--no-improve-limit", std::to_string(c.no_improve_limit),
      "--qaoa-p", std::to_string(c.qaoa.layers),
      "--qaoa-shots", std::to_string(c.qaoa.shots),
      "--qaoa-max-qubits", std::to_string(c.qaoa.max_qubits),
      "--qaoa-starts", std::to_string(c.qaoa.starts),
      "--qaoa-evals", std::to_string(c.qaoa.evals_per_start),
  };
}

unsigned threads_from_env() {
  const char* v = std::getenv("MLMC_THREADS");
  if (!v || !*v) return 0;
  unsigned t = 0;
  auto [ptr, ec] = std::from_chars(v, v + std::char_traits<char>::length(v), t);
  return ec == std::errc{} ? t : 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliInvocation inv;
  try {
    inv = parse_args(args);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? out : err) << e.what() << '\n';
    return e.exit_code();
  }
  return inv.command == Command::kSolve ? run_solve(inv, out, err) : run_bench(inv, out, err);
}

}  // namespace mlmc::cli
