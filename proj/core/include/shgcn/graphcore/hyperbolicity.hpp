#pragma once

#include <cstddef>

#include "shgcn/graphcore/graph.hpp"

namespace shgcn::graphcore {

struct HyperbolicityOptions {
  std::size_t max_nodes = 600;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Exact Gromov delta by the four-point condition over BFS distances:
// the maximum over 4-tuples of (largest - middle pairing sum) / 2.
// Throws ContractError when g is disconnected and CapacityError when g has
// more than options.max_nodes nodes. Returns a multiple of 0.5.
double delta_hyperbolicity(const Graph& g, const HyperbolicityOptions& options = {});

}  // namespace shgcn::graphcore
