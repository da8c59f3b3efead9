#include "mlmc/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "mlmc/error.hpp"

namespace mlmc {

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "edgelist" || name == "edge-list") return GraphFormat::kEdgeList;
  if (name == "mtx" || name == "matrix-market") return GraphFormat::kMatrixMarket;
  throw ConfigError("unknown graph format '" + std::string(name) + "' (expected edgelist or mtx)");
}

std::string_view to_string(GraphFormat f) {
  return f == GraphFormat::kMatrixMarket ? "mtx" : "edgelist";
}

GraphFormat guess_graph_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".mtx" ? GraphFormat::kMatrixMarket : GraphFormat::kEdgeList;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double parse_weight(std::string_view tok, std::size_t line_no) {
  auto w = parse_number<double>(tok);
  if (!w) throw MalformedInput(line_no, "bad edge weight '" + std::string(tok) + "'");
  if (!std::isfinite(*w) || *w < 0.0) {
    throw MalformedInput(line_no, "edge weight must be finite and nonnegative, got '" +
                                      std::string(tok) + "'");
  }
  return *w;
}

bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#' || c == '%';
  }
  return true;
}

LoadedGraph finish(NodeId n, std::vector<Edge> edges, std::vector<std::string> labels) {
  Graph g(n, std::move(edges));
  LoadedGraph out{std::move(g), std::move(labels), 0, 0};
  out.self_loops_dropped = out.graph.self_loops_dropped();
  out.duplicates_merged = out.graph.duplicates_merged();
  return out;
}

}  // namespace

LoadedGraph read_edge_list(std::istream& in) {
  struct RawEdge {
    std::string u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  bool numeric = true;
  std::uint64_t max_label = 0;
  bool saw_zero = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tok = split_ws(line);
    if (tok.size() < 2 || tok.size() > 3) {
      throw MalformedInput(line_no, "expected 'u v [w]', got " + std::to_string(tok.size()) + " fields");
    }
    double w = tok.size() == 3 ? parse_weight(tok[2], line_no) : 1.0;
    for (int k = 0; k < 2; ++k) {
      auto id = parse_number<std::uint64_t>(tok[k]);
      if (!id) {
        numeric = false;
      } else {
        max_label = std::max(max_label, *id);
        saw_zero = saw_zero || *id == 0;
      }
    }
    raw.push_back({std::string(tok[0]), std::string(tok[1]), w});
  }
  if (in.bad()) throw MalformedInput(line_no, "read error");
  if (raw.empty()) throw InvalidInstance("empty graph: no edges in input");

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::vector<std::string> labels;

  if (numeric) {
    const std::uint64_t base = saw_zero ? 0 : 1;
    const std::uint64_t n = max_label - base + 1;
    if (n >= std::numeric_limits<NodeId>::max()) throw InvalidInstance("node label too large");
    for (const auto& r : raw) {
      auto u = *parse_number<std::uint64_t>(r.u) - base;
      auto v = *parse_number<std::uint64_t>(r.v) - base;
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), r.w});
    }
    labels.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) labels.push_back(std::to_string(i + base));
    return finish(static_cast<NodeId>(n), std::move(edges), std::move(labels));
  }

  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };
  for (const auto& r : raw) {
    NodeId u = intern(r.u);
    NodeId v = intern(r.v);
    edges.push_back({u, v, r.w});
  }
  auto n = static_cast<NodeId>(labels.size());
  return finish(n, std::move(edges), std::move(labels));
}

LoadedGraph read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw MalformedInput(1, "missing Matrix Market header");
  ++line_no;

  auto header = split_ws(line);
  std::vector<std::string> h;
  for (auto t : header) {
    std::string s(t);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    h.push_back(std::move(s));
  }
  if (h.size() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix") {
    throw MalformedInput(line_no, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  if (h[2] != "coordinate") throw MalformedInput(line_no, "only coordinate format is supported");
  const std::string& field = h[3];
  const std::string& symmetry = h[4];
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double") {
    throw MalformedInput(line_no, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw MalformedInput(line_no, "unsupported symmetry '" + symmetry + "'");
  }

  std::optional<std::uint64_t> rows, cols, nnz;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tok = split_ws(line);
    if (tok.size() != 3) throw MalformedInput(line_no, "expected size line 'rows cols nnz'");
    rows = parse_number<std::uint64_t>(tok[0]);
    cols = parse_number<std::uint64_t>(tok[1]);
    nnz = parse_number<std::uint64_t>(tok[2]);
    if (!rows || !cols || !nnz) throw MalformedInput(line_no, "bad size line");
    break;
  }
  if (!rows) throw MalformedInput(line_no, "missing size line");
  if (*rows != *cols) throw MalformedInput(line_no, "matrix is not square");
  if (*rows == 0) throw InvalidInstance("empty graph: matrix has no rows");
  if (*rows >= std::numeric_limits<NodeId>::max()) throw InvalidInstance("matrix too large");

  const auto n = static_cast<NodeId>(*rows);
  std::vector<Edge> edges;
  edges.reserve(*nnz);
  std::uint64_t seen = 0;
  while (seen < *nnz && std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tok = split_ws(line);
    const std::size_t expect = pattern ? 2 : 3;
    if (tok.size() != expect) {
      throw MalformedInput(line_no, "expected " + std::to_string(expect) + " fields per entry");
    }
    auto i = parse_number<std::uint64_t>(tok[0]);
    auto j = parse_number<std::uint64_t>(tok[1]);
    if (!i || !j || *i == 0 || *j == 0 || *i > n || *j > n) {
      throw MalformedInput(line_no, "bad or out-of-range index");
    }
    double w = pattern ? 1.0 : parse_weight(tok[2], line_no);
    edges.push_back({static_cast<NodeId>(*i - 1), static_cast<NodeId>(*j - 1), w});
    ++seen;
  }
  if (seen < *nnz) {
    throw MalformedInput(line_no, "expected " + std::to_string(*nnz) + " entries, found " +
                                      std::to_string(seen));
  }

  std::vector<std::string> labels;
  labels.reserve(n);
  for (NodeId k = 0; k < n; ++k) labels.push_back(std::to_string(k + 1));
  return finish(n, std::move(edges), std::move(labels));
}

LoadedGraph load_graph(const std::filesystem::path& path, std::optional<GraphFormat> format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path.string() + "'");
  auto fmt = format.value_or(guess_graph_format(path));
  return fmt == GraphFormat::kMatrixMarket ? read_matrix_market(in) : read_edge_list(in);
}

}  // namespace mlmc
