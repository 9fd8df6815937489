#include "shgcn/graphcore/adjacency.hpp"

#include <string>

#include "shgcn/error.hpp"

namespace shgcn::graphcore {

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  auto csr = std::make_shared<NormalizedAdjacency::Csr>();
  const std::size_t n = g.num_nodes();
  csr->n = n;
  csr->offsets.reserve(n + 1);
  csr->offsets.push_back(0);
  csr->cols.reserve(n + 2 * g.num_edges());
  csr->values.reserve(n + 2 * g.num_edges());
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    const double w = 1.0 / static_cast<double>(nb.size() + 1);
    bool self_done = false;
    for (NodeId j : nb) {
      if (!self_done && i < j) {
        csr->cols.push_back(i);
        csr->values.push_back(w);
        self_done = true;
      }
      csr->cols.push_back(j);
      csr->values.push_back(w);
    }
    if (!self_done) {
      csr->cols.push_back(i);
      csr->values.push_back(w);
    }
    csr->offsets.push_back(csr->cols.size());
  }
  NormalizedAdjacency adj;
  adj.csr_ = std::move(csr);
  return adj;
}

numkit::Matrix NormalizedAdjacency::multiply(const numkit::Matrix& h) const {
  if (h.rows() != size()) {
    throw ShapeError("NormalizedAdjacency::multiply: operand has " + std::to_string(h.rows()) + " rows, expected " +
                     std::to_string(size()));
  }
  const std::size_t d = h.cols();
  std::vector<double> out(size() * d, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    double* dst = out.data() + i * d;
    for (std::size_t k = csr_->offsets[i]; k < csr_->offsets[i + 1]; ++k) {
      const double w = csr_->values[k];
      const auto src = h.row(csr_->cols[k]);
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  return numkit::Matrix(size(), d, std::move(out), h.mode());
}

numkit::Matrix NormalizedAdjacency::multiply_transposed(const numkit::Matrix& h) const {
  if (h.rows() != size()) throw ShapeError("NormalizedAdjacency::multiply_transposed: row count mismatch");
  const std::size_t d = h.cols();
  std::vector<double> out(size() * d, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto src = h.row(i);
    for (std::size_t k = csr_->offsets[i]; k < csr_->offsets[i + 1]; ++k) {
      const double w = csr_->values[k];
      double* dst = out.data() + static_cast<std::size_t>(csr_->cols[k]) * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  return numkit::Matrix(size(), d, std::move(out), h.mode());
}

numkit::Matrix NormalizedAdjacency::dense() const {
  std::vector<double> out(size() * size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t k = csr_->offsets[i]; k < csr_->offsets[i + 1]; ++k) out[i * size() + csr_->cols[k]] = csr_->values[k];
  return numkit::Matrix(size(), size(), std::move(out));
}

numkit::Var propagate(const NormalizedAdjacency& adj, numkit::Var h) {
  numkit::Tape& tape = h.tape();
  numkit::Matrix value = adj.multiply(h.value());
  const numkit::Var parents[] = {h};
  return tape.record(std::move(value), parents, "propagate", [adj](const numkit::BackwardArgs& args) {
    auto* gh = args.parent_grads[0];
    if (!gh) return;
    const std::size_t n = adj.size();
    const std::size_t d = args.grad_out.size() / (n == 0 ? 1 : n);
    const auto offsets = adj.row_offsets();
    const auto cols = adj.col_indices();
    const auto vals = adj.values();
    for (std::size_t i = 0; i < n; ++i) {
      const double* g = args.grad_out.data() + i * d;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        double* dst = gh->data() + static_cast<std::size_t>(cols[k]) * d;
        for (std::size_t c = 0; c < d; ++c) dst[c] += vals[k] * g[c];
      }
    }
  });
}

}  // namespace shgcn::graphcore
