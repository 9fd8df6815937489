#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "shgcn/graphcore/graph.hpp"
#include "shgcn/numkit/matrix.hpp"

namespace shgcn::graphcore {

// Balanced tree: root 0, children numbered in BFS order, `depth` levels
// below the root. Labels are the index of the root child whose subtree holds
// the node (the root gets 0).
Graph tree(std::size_t branching, std::size_t depth);

// Cycle 0-1-...-(n-1)-0, n >= 3. Labels split the ring into two arcs.
Graph cycle(std::size_t n);

// Path 0-1-...-(n-1). Labels split it into two halves.
Graph path(std::size_t n);

// G(n, p) with each pair present independently. Labels mark nodes whose
// degree exceeds the mean degree.
Graph erdos(std::size_t n, double p, std::uint64_t seed);

// Node features that drift along a BFS tree from node 0: the root draws a
// standard normal vector and every other node adds N(0, noise^2) per
// coordinate to its BFS parent's vector. Nearby nodes get similar features.
numkit::Matrix diffusion_features(const Graph& g, std::size_t dim, double noise, std::uint64_t seed);

// Disjoint union of `count` small random graphs for graph-level regression:
// random trees on [min_nodes, max_nodes] nodes with a few extra chords. The
// target of each graph is its mean shortest-path length. Node features are
// one-hot degree indicators (degrees above 7 share the last slot).
struct GraphCollection {
  Graph merged;
  std::vector<std::size_t> graph_of;
  std::vector<double> targets;
  std::size_t num_graphs() const noexcept { return targets.size(); }
};
GraphCollection graph_collection(std::size_t count, std::uint64_t seed, std::size_t min_nodes = 8,
                                 std::size_t max_nodes = 24);

// Parses "tree:b,d", "cycle:n", "path:n" or "erdos:n,p,seed".
// Throws ContractError on malformed input.
Graph synthetic(std::string_view spec);

}  // namespace shgcn::graphcore
