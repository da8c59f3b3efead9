#include "mlmc/report.hpp"

#include <ostream>

#include "mlmc/error.hpp"

namespace mlmc {

using nlohmann::json;

json config_to_json(const RunConfig& cfg) {
  return json{
      {"k", cfg.subproblem_size},
      {"multistarts", cfg.multistarts},
      {"dim", cfg.dim},
      {"embed_sweeps", cfg.embed_sweeps},
      {"embed_tol", cfg.embed_tolerance},
      {"sparsify", cfg.sparsify_fraction},
      {"solver", cfg.solver},
      {"seed", cfg.seed},
      {"coarsest_budget", cfg.coarsest_budget},
      {"sub_budget", cfg.subproblem_budget},
      {"no_improve_limit", cfg.no_improve_limit},
      {"qaoa_p", cfg.qaoa.layers},
      {"qaoa_shots", cfg.qaoa.shots},
      {"qaoa_max_qubits", cfg.qaoa.max_qubits},
      {"qaoa_starts", cfg.qaoa.starts},
      {"qaoa_evals", cfg.qaoa.evals_per_start},
  };
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "k") c.subproblem_size = value.get<NodeId>();
    else if (key == "multistarts") c.multistarts = value.get<int>();
    else if (key == "dim") c.dim = value.get<std::size_t>();
    else if (key == "embed_sweeps") c.embed_sweeps = value.get<int>();
    else if (key == "embed_tol") c.embed_tolerance = value.get<double>();
    else if (key == "sparsify") c.sparsify_fraction = value.get<double>();
    else if (key == "solver") c.solver = value.get<std::string>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "coarsest_budget") c.coarsest_budget = value.get<double>();
    else if (key == "sub_budget") c.subproblem_budget = value.get<double>();
    else if (key == "no_improve_limit") c.no_improve_limit = value.get<int>();
    else if (key == "qaoa_p") c.qaoa.layers = value.get<int>();
    else if (key == "qaoa_shots") c.qaoa.shots = value.get<std::size_t>();
    else if (key == "qaoa_max_qubits") c.qaoa.max_qubits = value.get<std::size_t>();
    else if (key == "qaoa_starts") c.qaoa.starts = value.get<int>();
    else if (key == "qaoa_evals") c.qaoa.evals_per_start = value.get<std::size_t>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

json report_to_json(const RunReport& report) {
  json levels = json::array();
  for (const auto& l : report.per_level) {
    levels.push_back({
        {"level", l.level},
        {"nodes", l.nodes},
        {"edges", l.edges},
        {"avg_degree", l.avg_degree},
        {"density", l.density},
        {"total_weight", l.total_weight},
        {"lost_weight", l.lost_weight},
        {"sparsified_edges", l.sparsified_edges},
        {"coarse_objective", l.coarse_objective},
        {"refined_objective", l.refined_objective},
        {"iterations", l.iterations},
        {"subproblem_solves", l.subproblem_solves},
        {"solver_failures", l.solver_failures},
    });
  }
  json assignment = json::array();
  for (auto b : report.best_assignment) assignment.push_back(static_cast<int>(b));

  return json{
      {"objective", report.best_objective},
      {"assignment", std::move(assignment)},
      {"coarse_ratio", report.coarse_ratio ? json(*report.coarse_ratio) : json(nullptr)},
      {"coarsest_objective", report.coarsest_objective},
      {"coarsened", report.coarsened},
      {"coarsest_solver", report.coarsest_solver},
      {"per_level", std::move(levels)},
      {"wall_time", report.wall_time},
      {"config", config_to_json(report.config)},
      {"seed", report.config.seed},
  };
}

void write_partition(std::ostream& out, std::span<const std::uint8_t> x,
                     const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << (i < labels.size() ? labels[i] : std::to_string(i)) << ' ' << static_cast<int>(x[i]) << '\n';
  }
}

}  // namespace mlmc
