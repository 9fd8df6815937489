#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "shgcn/graphcore/graph.hpp"
#include "shgcn/numkit/matrix.hpp"
#include "shgcn/numkit/tape.hpp"

namespace shgcn::graphcore {

// Row-stochastic D^-1 (A + I) in CSR form. Copies share the same storage.
class NormalizedAdjacency {
 public:
  NormalizedAdjacency() = default;

  std::size_t size() const noexcept { return csr_ ? csr_->n : 0; }
  std::size_t nnz() const noexcept { return csr_ ? csr_->cols.size() : 0; }

  std::span<const std::size_t> row_offsets() const noexcept { return csr_->offsets; }
  std::span<const NodeId> col_indices() const noexcept { return csr_->cols; }
  std::span<const double> values() const noexcept { return csr_->values; }

  // A * h, accumulated in double, each entry rounded to h.mode().
  numkit::Matrix multiply(const numkit::Matrix& h) const;
  // A^T * h, used for the backward pass.
  numkit::Matrix multiply_transposed(const numkit::Matrix& h) const;

  numkit::Matrix dense() const;

 private:
  friend NormalizedAdjacency normalized_adjacency(const Graph& g);

  struct Csr {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::vector<NodeId> cols;
    std::vector<double> values;
  };
  std::shared_ptr<const Csr> csr_;
};

NormalizedAdjacency normalized_adjacency(const Graph& g);

// Differentiable A * h on h's tape. The adjacency itself is a constant.
numkit::Var propagate(const NormalizedAdjacency& adj, numkit::Var h);

}  // namespace shgcn::graphcore
