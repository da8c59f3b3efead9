#include "mlmc/subproblem.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "mlmc/error.hpp"

namespace mlmc {

namespace {

constexpr NodeId kNotFree = std::numeric_limits<NodeId>::max();

}  // namespace

Subproblem whole_graph_subproblem(const Graph& g) {
  Subproblem sp;
  sp.free_nodes.resize(g.num_nodes());
  std::iota(sp.free_nodes.begin(), sp.free_nodes.end(), NodeId{0});
  sp.internal = g;
  sp.bias0.assign(g.num_nodes(), 0.0);
  sp.bias1.assign(g.num_nodes(), 0.0);
  return sp;
}

Subproblem build_subproblem(const Graph& g, const CutAssignment& x, std::span<const NodeId> chosen) {
  if (chosen.empty()) throw ContractViolation("subproblem needs at least one node");
  if (x.x.size() != g.num_nodes()) throw ContractViolation("assignment does not match graph");

  const std::size_t k = chosen.size();
  std::vector<NodeId> local(g.num_nodes(), kNotFree);
  for (std::size_t a = 0; a < k; ++a) {
    NodeId v = chosen[a];
    if (v >= g.num_nodes() || local[v] != kNotFree) {
      throw ContractViolation("chosen nodes must be distinct and in range");
    }
    local[v] = static_cast<NodeId>(a);
  }

  Subproblem sp;
  sp.free_nodes.assign(chosen.begin(), chosen.end());
  sp.bias0.assign(k, 0.0);
  sp.bias1.assign(k, 0.0);
  std::vector<Edge> internal;
  // Cut weight on edges touching a free node; the rest of the current cut
  // runs between fixed nodes.
  double free_cut = 0.0;

  for (std::size_t a = 0; a < k; ++a) {
    NodeId v = chosen[a];
    for (const auto& nb : g.neighbors(v)) {
      NodeId b = local[nb.node];
      if (b == kNotFree) {
        (x.x[nb.node] == 0 ? sp.bias0[a] : sp.bias1[a]) += nb.weight;
        if (x.x[nb.node] != x.x[v]) free_cut += nb.weight;
      } else if (a < b) {
        internal.push_back({static_cast<NodeId>(a), b, nb.weight});
        if (x.x[nb.node] != x.x[v]) free_cut += nb.weight;
      }
    }
  }
  sp.internal = Graph(static_cast<NodeId>(k), std::move(internal));
  sp.constant = std::max(0.0, x.objective - free_cut);
  return sp;
}

double subproblem_objective(const Subproblem& sp, std::span<const std::uint8_t> y) {
  if (y.size() != sp.size()) throw ContractViolation("subproblem assignment has wrong length");
  double s = sp.constant;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] ? sp.bias0[i] : sp.bias1[i];
  return s + cut_value(sp.internal, y);
}

std::vector<double> subproblem_gains(const Subproblem& sp, std::span<const std::uint8_t> y) {
  auto gains = compute_gains(sp.internal, y).gain;
  for (std::size_t i = 0; i < y.size(); ++i) {
    gains[i] += y[i] ? sp.bias1[i] - sp.bias0[i] : sp.bias0[i] - sp.bias1[i];
  }
  return gains;
}

Bits restrict_to(const Subproblem& sp, const CutAssignment& x) {
  Bits y(sp.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x.x[sp.free_nodes[i]];
  return y;
}

void merge_solution(const Graph& g, CutAssignment& x, GainTable& gains, const Subproblem& sp,
                    std::span<const std::uint8_t> y) {
  if (y.size() != sp.size()) throw ContractViolation("subproblem assignment has wrong length");
  for (std::size_t i = 0; i < y.size(); ++i) {
    NodeId v = sp.free_nodes[i];
    if (x.x[v] != y[i]) apply_flip(g, x, gains, v);
  }
}

void write_qubo(std::ostream& out, const Subproblem& sp) {
  const std::size_t k = sp.size();
  std::vector<double> linear(k, 0.0);
  double offset = sp.constant;
  for (std::size_t i = 0; i < k; ++i) {
    offset += sp.bias1[i];
    linear[i] = sp.bias0[i] - sp.bias1[i];
  }
  for (const auto& e : sp.internal.edges()) {
    linear[e.u] += e.w;
    linear[e.v] += e.w;
  }
  auto old_precision = out.precision(17);
  out << "# maximize offset + sum linear_i y_i + sum quadratic_ij y_i y_j\n";
  out << "variables " << k << '\n';
  out << "offset " << offset << '\n';
  for (std::size_t i = 0; i < k; ++i) out << "linear " << i << ' ' << linear[i] << '\n';
  for (const auto& e : sp.internal.edges()) {
    out << "quadratic " << e.u << ' ' << e.v << ' ' << -2.0 * e.w << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mlmc
