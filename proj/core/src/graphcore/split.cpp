#include "shgcn/graphcore/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "shgcn/error.hpp"
#include "shgcn/numkit/random.hpp"

namespace shgcn::graphcore {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

void validate(const SplitRatios& r) {
  const bool finite = std::isfinite(r.train) && std::isfinite(r.val) && std::isfinite(r.test);
  if (!finite || r.train <= 0.0 || r.val < 0.0 || r.test < 0.0) {
    throw ContractError("split_edges: ratios must be non-negative with a positive training share");
  }
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) throw ContractError("split_edges: ratios must sum to 1");
}

std::size_t non_edge_count(const Graph& g) {
  const std::size_t n = g.num_nodes();
  return n * (n - (n > 0 ? 1 : 0)) / 2 - g.num_edges();
}

}  // namespace

EdgeSplit split_edges(const Graph& g, const SplitRatios& ratios, std::uint64_t seed) {
  validate(ratios);
  const std::size_t m = g.num_edges();
  if (m == 0) throw ContractError("split_edges: graph has no edges");

  const auto n_val = static_cast<std::size_t>(std::lround(ratios.val * static_cast<double>(m)));
  const auto n_test = std::min(static_cast<std::size_t>(std::lround(ratios.test * static_cast<double>(m))), m - std::min(n_val, m));
  if (n_val + n_test >= m) throw ContractError("split_edges: ratios leave no training edges");
  const std::size_t n_train = m - n_val - n_test;

  std::vector<Edge> shuffled(g.edges().begin(), g.edges().end());
  numkit::Rng rng(seed);
  rng.shuffle(std::span<Edge>(shuffled));

  EdgeSplit split;
  split.seed = seed;

  DisjointSets forest(g.num_nodes());
  std::vector<Edge> reserved, rest;
  for (const Edge& e : shuffled) (forest.unite(e.first, e.second) ? reserved : rest).push_back(e);

  if (reserved.size() <= n_train) {
    auto it = rest.begin();
    split.val_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_val));
    it += static_cast<std::ptrdiff_t>(n_val);
    split.test_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
    it += static_cast<std::ptrdiff_t>(n_test);
    split.train_pos = std::move(reserved);
    split.train_pos.insert(split.train_pos.end(), it, rest.end());
  } else {
    split.connectivity_fallback = true;
    split.warning = "spanning forest needs " + std::to_string(reserved.size()) + " training edges but only " +
                    std::to_string(n_train) + " are available; training graph may be disconnected";
    auto it = shuffled.begin();
    split.val_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_val));
    it += static_cast<std::ptrdiff_t>(n_val);
    split.test_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
    it += static_cast<std::ptrdiff_t>(n_test);
    split.train_pos.assign(it, shuffled.end());
  }
  std::sort(split.train_pos.begin(), split.train_pos.end());

  split.val_neg = sample_non_edges(g, split.val_pos.size(), numkit::mix_seed(seed, 1));
  split.test_neg = sample_non_edges(g, split.test_pos.size(), numkit::mix_seed(seed, 2), split.val_neg);
  return split;
}

NodeSplit split_nodes(std::size_t n, const SplitRatios& ratios, std::uint64_t seed) {
  validate(ratios);
  const auto n_val = static_cast<std::size_t>(std::lround(ratios.val * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::lround(ratios.test * static_cast<double>(n)));
  if (n_val + n_test >= n) throw ContractError("split_nodes: ratios leave no training nodes");
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  numkit::Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(ids));
  NodeSplit out;
  out.val.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_val));
  out.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_val),
                  ids.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
  out.train.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), ids.end());
  for (auto* part : {&out.train, &out.val, &out.test}) std::sort(part->begin(), part->end());
  return out;
}

std::vector<Edge> sample_non_edges(const Graph& g, std::size_t count, std::uint64_t seed,
                                   const std::vector<Edge>& exclude) {
  if (count == 0) return {};
  const std::set<Edge> excluded(exclude.begin(), exclude.end());
  const std::size_t available = non_edge_count(g);
  if (available < count + excluded.size()) {
    throw ContractError("sample_non_edges: graph has only " + std::to_string(available) + " non-edges");
  }
  numkit::Rng rng(seed);
  const std::size_t n = g.num_nodes();
  std::vector<Edge> out;
  out.reserve(count);

  // Dense graphs: enumerate the complement instead of rejecting most draws.
  if (available < 4 * (count + excluded.size())) {
    std::vector<Edge> pool;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v) && !excluded.count({u, v})) pool.push_back({u, v});
    rng.shuffle(std::span<Edge>(pool));
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
  }

  std::set<Edge> chosen;
  while (out.size() < count) {
    const auto u = static_cast<NodeId>(rng.index(n));
    const auto v = static_cast<NodeId>(rng.index(n));
    if (u == v || g.has_edge(u, v)) continue;
    const Edge e = make_edge(u, v);
    if (excluded.count(e) || !chosen.insert(e).second) continue;
    out.push_back(e);
  }
  return out;
}

std::vector<Edge> sample_negatives(const Graph& g, std::size_t count, std::uint64_t seed) {
  if (count == 0) return {};
  if (non_edge_count(g) == 0) throw ContractError("sample_negatives: graph is complete");
  numkit::Rng rng(seed);
  const std::size_t n = g.num_nodes();
  std::vector<Edge> out;
  out.reserve(count);
  while (out.size() < count) {
    const auto u = static_cast<NodeId>(rng.index(n));
    const auto v = static_cast<NodeId>(rng.index(n));
    if (u == v || g.has_edge(u, v)) continue;
    out.push_back(make_edge(u, v));
  }
  return out;
}

}  // namespace shgcn::graphcore
