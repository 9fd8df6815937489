#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "shgcn/graphcore/graph.hpp"
#include "shgcn/numkit/matrix.hpp"

namespace shgcn::graphcore {

// Two 0-based node ids per line, separated by whitespace or a comma. Blank
// lines and lines starting with '#' are skipped. Node count is one past the
// largest id unless a larger `min_nodes` is given.
struct EdgeList {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
};
EdgeList load_edge_list(const std::filesystem::path& path, std::size_t min_nodes = 0);

// CSV with one row per node; every row must have the same column count.
numkit::Matrix load_features_csv(const std::filesystem::path& path);

// Single integer column, one row per node.
std::vector<int> load_labels_csv(const std::filesystem::path& path);

// Combines the three files. Missing features default to identity.
Graph load_graph(const std::filesystem::path& edges, const std::optional<std::filesystem::path>& features,
                 const std::optional<std::filesystem::path>& labels);

}  // namespace shgcn::graphcore
