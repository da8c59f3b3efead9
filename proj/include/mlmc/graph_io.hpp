#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlmc/graph.hpp"

namespace mlmc {

enum class GraphFormat { kEdgeList, kMatrixMarket };

/// Parses "edgelist" / "mtx" (also "edge-list", "matrix-market").
GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat f);

/// Picks the format from the file extension: ".mtx" is Matrix Market,
/// everything else is an edge list.
GraphFormat guess_graph_format(const std::filesystem::path& path);

struct LoadedGraph {
  Graph graph;
  /// Original label of every normalized node id.
  std::vector<std::string> labels;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

/**
 * Edge-list reader. Lines are "u v [w]"; lines starting with '#' or '%' and
 * blank lines are skipped. Integer labels are shifted to 0-based ids (the
 * input is taken as 0-based if a 0 label appears anywhere, 1-based
 * otherwise) and n = max id + 1. If any label is not a nonnegative integer,
 * labels are mapped to contiguous ids in order of first appearance.
 */
LoadedGraph read_edge_list(std::istream& in);

/// Matrix Market coordinate reader (pattern/real/integer, general/symmetric).
LoadedGraph read_matrix_market(std::istream& in);

LoadedGraph load_graph(const std::filesystem::path& path, std::optional<GraphFormat> format = {});

}  // namespace mlmc
