#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shgcn/graphcore/graph.hpp"

namespace shgcn::graphcore {

struct SplitRatios {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

struct EdgeSplit {
  std::vector<Edge> train_pos;
  std::vector<Edge> val_pos;
  std::vector<Edge> test_pos;
  std::vector<Edge> val_neg;
  std::vector<Edge> test_neg;
  std::uint64_t seed = 0;
  // Set when a spanning forest could not be kept inside the training edges.
  bool connectivity_fallback = false;
  std::string warning;
};

// Seeded link-prediction split. Counts are rounded to nearest: val and test
// take lround(ratio * m) edges each and train takes the rest. A spanning
// forest of g is reserved for training when it fits; otherwise the split is
// a plain shuffle and `warning` explains why.
EdgeSplit split_edges(const Graph& g, const SplitRatios& ratios, std::uint64_t seed);

struct NodeSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Seeded shuffle of node ids with the same rounding rule as split_edges.
NodeSplit split_nodes(std::size_t n, const SplitRatios& ratios, std::uint64_t seed);

// Distinct non-edges drawn uniformly, none of which appears in `exclude`.
std::vector<Edge> sample_non_edges(const Graph& g, std::size_t count, std::uint64_t seed,
                                   const std::vector<Edge>& exclude = {});

// Uniform non-edges with replacement (per-epoch training negatives).
std::vector<Edge> sample_negatives(const Graph& g, std::size_t count, std::uint64_t seed);

}  // namespace shgcn::graphcore
