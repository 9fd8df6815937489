#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shgcn/graphcore/graph.hpp"
#include "shgcn/numkit/matrix.hpp"
#include "shgcn/numkit/tape.hpp"

namespace shgcn::layers {

using numkit::Var;

// 1 / (exp((||zi - zj||^2 - r) / t) + 1), squared Euclidean distance.
double fermi_dirac_score(std::span<const double> zi, std::span<const double> zj, double r, double t);

// Scores for every (u, v) pair as a column (pairs.size() x 1).
Var fermi_dirac(Var Z, std::span<const graphcore::Edge> pairs, double r, double t);

// Class logits H Wc^T + bc. Wc is k x d, bc is 1 x k.
Var nc_head(Var H, Var Wc, Var bc);
numkit::Matrix nc_head_forward(const numkit::Matrix& H, const numkit::Matrix& Wc, const numkit::Matrix& bc);

// Per-graph, per-column median of the rows assigned to each graph
// (graph_of[i] in [0, num_graphs)). Even counts average the two middle
// values. Throws ContractError when a graph has no rows.
Var median_pool(Var H, std::span<const std::size_t> graph_of, std::size_t num_graphs);
numkit::Matrix median_pool_forward(const numkit::Matrix& H, std::span<const std::size_t> graph_of,
                                   std::size_t num_graphs);

// Two-layer MLP readout relu(P W1^T + b1) W2^T + b2 -> one value per row.
Var readout(Var pooled, Var W1, Var b1, Var W2, Var b2);

}  // namespace shgcn::layers
