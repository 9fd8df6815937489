#include "shgcn/graphcore/generators.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <vector>

#include "shgcn/error.hpp"
#include "shgcn/numkit/random.hpp"

namespace shgcn::graphcore {
namespace {

constexpr std::size_t kMaxSyntheticNodes = 1'000'000;

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view spec) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ContractError("synthetic graph '" + std::string(spec) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Graph tree(std::size_t branching, std::size_t depth) {
  if (branching == 0) throw ContractError("tree: branching factor must be positive");
  std::vector<Edge> edges;
  std::vector<int> labels{0};
  std::size_t level_start = 0, level_size = 1, next = 1;
  for (std::size_t level = 0; level < depth; ++level) {
    for (std::size_t p = level_start; p < level_start + level_size; ++p) {
      for (std::size_t c = 0; c < branching; ++c) {
        if (next >= kMaxSyntheticNodes) throw ContractError("tree: graph too large");
        edges.push_back({static_cast<NodeId>(p), static_cast<NodeId>(next)});
        labels.push_back(level == 0 ? static_cast<int>(c) : labels[p]);
        ++next;
      }
    }
    level_start += level_size;
    level_size *= branching;
  }
  return Graph(next, edges, {}, std::move(labels));
}

Graph cycle(std::size_t n) {
  if (n < 3) throw ContractError("cycle: need at least 3 nodes");
  std::vector<Edge> edges;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back(make_edge(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)));
    labels[i] = i < n / 2 ? 0 : 1;
  }
  return Graph(n, edges, {}, std::move(labels));
}

Graph path(std::size_t n) {
  if (n == 0) throw ContractError("path: need at least 1 node");
  std::vector<Edge> edges;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
    labels[i] = i < n / 2 ? 0 : 1;
  }
  return Graph(n, edges, {}, std::move(labels));
}

Graph erdos(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0 || n > kMaxSyntheticNodes) throw ContractError("erdos: node count out of range");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("erdos: p must lie in [0, 1]");
  numkit::Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.push_back({u, v});
  Graph g(n, edges);
  const double mean = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);
  std::vector<int> labels(n);
  for (NodeId u = 0; u < n; ++u) labels[u] = static_cast<double>(g.degree(u)) > mean ? 1 : 0;
  return g.with_labels(std::move(labels));
}

numkit::Matrix diffusion_features(const Graph& g, std::size_t dim, double noise, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (dim == 0) throw ContractError("diffusion_features: dimension must be positive");
  numkit::Rng rng(seed);
  std::vector<double> data(n * dim, 0.0);
  std::vector<bool> seen(n, false);
  // One BFS per component; each component root starts fresh.
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    for (std::size_t k = 0; k < dim; ++k) data[root * dim + k] = rng.normal();
    std::vector<NodeId> frontier{root};
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const NodeId u = frontier[head];
      for (NodeId v : g.neighbors(u)) {
        if (seen[v]) continue;
        seen[v] = true;
        for (std::size_t k = 0; k < dim; ++k) data[v * dim + k] = data[u * dim + k] + noise * rng.normal();
        frontier.push_back(v);
      }
    }
  }
  return numkit::Matrix(n, dim, std::move(data));
}

GraphCollection graph_collection(std::size_t count, std::uint64_t seed, std::size_t min_nodes, std::size_t max_nodes) {
  if (count == 0) throw ContractError("graph_collection: count must be positive");
  if (min_nodes < 2 || max_nodes < min_nodes) throw ContractError("graph_collection: bad node range");
  constexpr std::size_t kDegreeSlots = 8;
  numkit::Rng rng(seed);
  std::vector<Edge> edges;
  GraphCollection out;
  std::size_t offset = 0;
  for (std::size_t gi = 0; gi < count; ++gi) {
    const std::size_t n = min_nodes + static_cast<std::size_t>(rng.index(max_nodes - min_nodes + 1));
    std::vector<Edge> local;
    for (std::size_t v = 1; v < n; ++v) local.push_back({static_cast<NodeId>(rng.index(v)), static_cast<NodeId>(v)});
    const std::size_t chords = static_cast<std::size_t>(rng.index(3));
    for (std::size_t k = 0; k < chords; ++k) {
      const auto u = static_cast<NodeId>(rng.index(n));
      const auto v = static_cast<NodeId>(rng.index(n));
      if (u != v) local.push_back(make_edge(u, v));
    }
    const Graph g(n, local);
    double total = 0.0;
    for (NodeId s = 0; s < n; ++s)
      for (std::size_t d : bfs_distances(g, s)) total += static_cast<double>(d);
    out.targets.push_back(total / static_cast<double>(n * (n - 1)));
    for (const Edge& e : g.edges()) {
      edges.push_back({static_cast<NodeId>(e.first + offset), static_cast<NodeId>(e.second + offset)});
    }
    out.graph_of.insert(out.graph_of.end(), n, gi);
    offset += n;
  }
  Graph merged(offset, edges);
  std::vector<double> features(offset * kDegreeSlots, 0.0);
  for (NodeId u = 0; u < offset; ++u) features[u * kDegreeSlots + std::min(merged.degree(u), kDegreeSlots) - 1] = 1.0;
  out.merged = merged.with_features(numkit::Matrix(offset, kDegreeSlots, std::move(features)));
  return out;
}

Graph synthetic(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ContractError("synthetic graph '" + std::string(spec) + "': expected kind:params");
  }
  const auto kind = spec.substr(0, colon);
  const auto args = split_commas(spec.substr(colon + 1));
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw ContractError("synthetic graph '" + std::string(spec) + "': expected " + std::to_string(count) +
                          " parameters");
    }
  };
  if (kind == "tree") {
    expect(2);
    return tree(parse_number<std::size_t>(args[0], spec), parse_number<std::size_t>(args[1], spec));
  }
  if (kind == "cycle") {
    expect(1);
    return cycle(parse_number<std::size_t>(args[0], spec));
  }
  if (kind == "path") {
    expect(1);
    return path(parse_number<std::size_t>(args[0], spec));
  }
  if (kind == "erdos") {
    expect(3);
    return erdos(parse_number<std::size_t>(args[0], spec), parse_number<double>(args[1], spec),
                 parse_number<std::uint64_t>(args[2], spec));
  }
  throw ContractError("synthetic graph '" + std::string(spec) + "': unknown kind '" + std::string(kind) + "'");
}

}  // namespace shgcn::graphcore
