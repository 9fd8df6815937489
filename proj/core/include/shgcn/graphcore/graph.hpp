#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "shgcn/numkit/matrix.hpp"

namespace shgcn::graphcore {

using NodeId = std::uint32_t;
// Undirected edge stored with first < second.
using Edge = std::pair<NodeId, NodeId>;

// Immutable undirected graph with optional node features, node labels and a
// graph-level regression target. Input edges are symmetrised, self-loops
// dropped and duplicates merged on construction.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::span<const Edge> edges, numkit::Matrix features = {},
        std::optional<std::vector<int>> labels = std::nullopt, std::optional<double> graph_target = std::nullopt);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId u) const;
  std::size_t degree(NodeId u) const { return neighbors(u).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  const numkit::Matrix& features() const noexcept { return features_; }
  bool has_features() const noexcept { return !features_.empty(); }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  std::optional<double> graph_target() const noexcept { return graph_target_; }

  Graph with_features(numkit::Matrix features) const;
  Graph with_labels(std::vector<int> labels) const;
  Graph with_target(double target) const;

  // Same nodes, features and labels, restricted to the given edge list.
  Graph with_edges(std::span<const Edge> edges) const;

  bool connected() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  numkit::Matrix features_;
  std::optional<std::vector<int>> labels_;
  std::optional<double> graph_target_;
};

Edge make_edge(NodeId u, NodeId v) noexcept;

// Hop distances from source; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source);

// Longest shortest path. Throws ContractError for disconnected graphs.
std::size_t diameter(const Graph& g);

// Identity features (one-hot node indicator), n x n.
numkit::Matrix identity_features(std::size_t n);

}  // namespace shgcn::graphcore
