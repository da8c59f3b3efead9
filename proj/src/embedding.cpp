#include "mlmc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mlmc/error.hpp"
#include "mlmc/kdtree.hpp"
#include "mlmc/random.hpp"

namespace mlmc {

namespace {

constexpr double kCoincident = 1e-12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    double d = a[c] - b[c];
    s += d * d;
  }
  return std::sqrt(s);
}

void random_unit(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double n = 0.0;
  do {
    for (double& c : out) c = normal(rng);
    n = norm(out);
  } while (n < 1e-12);
  for (double& c : out) c /= n;
}

double local_term(const Graph& g, const Embedding& e, NodeId i, std::span<const double> p) {
  double s = 0.0;
  for (const auto& nb : g.neighbors(i)) s += nb.weight * distance(p, e.row(nb.node));
  return s;
}

}  // namespace

Embedding embed(const Graph& g, const EmbedOptions& options, std::uint64_t seed,
                const SweepObserver& observer) {
  if (options.dim < 1) throw ContractViolation("embedding dimension must be >= 1");
  if (options.max_sweeps < 1) throw ContractViolation("embedding sweeps must be >= 1");

  const std::size_t n = g.num_nodes();
  const std::size_t d = options.dim;
  Rng rng(seed);
  Embedding e(n, d);

  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = e.row(i);
    double len = 0.0;
    do {
      for (double& c : p) c = uniform(rng);
      len = norm(p);
    } while (len < 1e-12);
    for (double& c : p) c /= len;
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<double> step(d), candidate(d), dir(d);

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    double displacement = 0.0;
    bool coincident = false;

    for (NodeId i : order) {
      if (g.degree(i) == 0) continue;
      auto p = e.row(i);
      std::fill(step.begin(), step.end(), 0.0);
      double wsum = 0.0;
      for (const auto& nb : g.neighbors(i)) {
        auto q = e.row(nb.node);
        double dist = distance(p, q);
        wsum += nb.weight;
        if (dist < kCoincident) {
          coincident = true;
          random_unit(rng, dir);
          for (std::size_t c = 0; c < d; ++c) step[c] += nb.weight * dir[c];
        } else {
          for (std::size_t c = 0; c < d; ++c) step[c] += nb.weight * (p[c] - q[c]) / dist;
        }
      }
      if (wsum <= 0.0) continue;

      const double eta = 1.0 / wsum;
      for (std::size_t c = 0; c < d; ++c) candidate[c] = p[c] + eta * step[c];
      double len = norm(candidate);
      if (len < 1e-12) {
        // Step lands on the origin: the ascent direction is exactly -p.
        double slen = norm(step);
        if (slen < 1e-12) continue;
        for (std::size_t c = 0; c < d; ++c) candidate[c] = step[c] / slen;
      } else {
        for (double& c : candidate) c /= len;
      }

      if (local_term(g, e, i, candidate) < local_term(g, e, i, p)) continue;
      displacement += distance(p, candidate);
      std::copy(candidate.begin(), candidate.end(), p.begin());
    }

    e.iterations_run = sweep;
    if (observer) observer(sweep, e);
    // A sweep that met coincident neighbors is not converged even if nothing moved.
    if (!coincident && n > 0 && displacement / static_cast<double>(n) < options.tolerance) break;
  }
  return e;
}

double embedding_objective(const Graph& g, const Embedding& e) {
  double s = 0.0;
  for (const auto& edge : g.edges()) s += edge.w * distance(e.row(edge.u), e.row(edge.v));
  return s;
}

NodeId nearest_unpaired(const Embedding& e, NodeId i, const std::vector<bool>& used) {
  KdTree tree(e.data(), e.dim());
  tree.deactivate(i);
  for (NodeId k = 0; k < used.size() && k < e.num_nodes(); ++k) {
    if (used[k]) tree.deactivate(k);
  }
  auto j = tree.nearest_active(e.row(i));
  if (!j) throw InvalidInstance("no unpaired candidate left for node " + std::to_string(i));
  return *j;
}

void write_embedding_csv(std::ostream& out, const Embedding& e) {
  out << "node_id";
  for (std::size_t c = 1; c <= e.dim(); ++c) out << ",p_" << c;
  out << '\n';
  auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < e.num_nodes(); ++i) {
    out << i;
    for (double v : e.row(i)) out << ',' << v;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mlmc
