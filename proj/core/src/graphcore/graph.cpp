#include "shgcn/graphcore/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "shgcn/error.hpp"

namespace shgcn::graphcore {

Edge make_edge(NodeId u, NodeId v) noexcept { return u < v ? Edge{u, v} : Edge{v, u}; }

Graph::Graph(std::size_t n, std::span<const Edge> edges, numkit::Matrix features,
             std::optional<std::vector<int>> labels, std::optional<double> graph_target)
    : n_(n), features_(std::move(features)), labels_(std::move(labels)), graph_target_(graph_target) {
  if (n > std::numeric_limits<NodeId>::max()) throw ContractError("Graph: too many nodes");
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.first >= n || e.second >= n) {
      throw ContractError("Graph: edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
                          ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (e.first == e.second) continue;
    edges_.push_back(make_edge(e.first, e.second));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  if (!features_.empty() && features_.rows() != n) {
    throw ShapeError("Graph: feature matrix has " + std::to_string(features_.rows()) + " rows for " +
                     std::to_string(n) + " nodes");
  }
  if (labels_ && labels_->size() != n) {
    throw ShapeError("Graph: " + std::to_string(labels_->size()) + " labels for " + std::to_string(n) + " nodes");
  }

  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.first + 1];
    ++offsets_[e.second + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.first]++] = e.second;
    adjacency_[fill[e.second]++] = e.first;
  }
  for (std::size_t i = 0; i < n; ++i) std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  if (u >= n_) throw ContractError("Graph::neighbors: node out of range");
  return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= n_ || v >= n_) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::with_features(numkit::Matrix features) const {
  return Graph(n_, edges_, std::move(features), labels_, graph_target_);
}

Graph Graph::with_labels(std::vector<int> labels) const {
  return Graph(n_, edges_, features_, std::move(labels), graph_target_);
}

Graph Graph::with_target(double target) const { return Graph(n_, edges_, features_, labels_, target); }

Graph Graph::with_edges(std::span<const Edge> edges) const {
  return Graph(n_, edges, features_, labels_, graph_target_);
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == std::numeric_limits<std::size_t>::max(); });
}

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::size_t> dist(g.num_nodes(), std::numeric_limits<std::size_t>::max());
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] != std::numeric_limits<std::size_t>::max()) continue;
      dist[v] = dist[u] + 1;
      frontier.push(v);
    }
  }
  return dist;
}

std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    for (std::size_t d : bfs_distances(g, s)) {
      if (d == std::numeric_limits<std::size_t>::max()) throw ContractError("diameter: graph is disconnected");
      best = std::max(best, d);
    }
  }
  return best;
}

numkit::Matrix identity_features(std::size_t n) { return numkit::Matrix::identity(n); }

}  // namespace shgcn::graphcore
