#include "shgcn/layers/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shgcn/error.hpp"
#include "shgcn/numkit/ops.hpp"

namespace shgcn::layers {
namespace {

namespace nk = numkit::ops;

}  // namespace

double fermi_dirac_score(std::span<const double> zi, std::span<const double> zj, double r, double t) {
  if (zi.size() != zj.size()) throw ShapeError("fermi_dirac_score: dimension mismatch");
  if (!(t > 0.0)) throw ContractError("fermi_dirac_score: t must be positive");
  double d2 = 0.0;
  for (std::size_t k = 0; k < zi.size(); ++k) d2 += (zi[k] - zj[k]) * (zi[k] - zj[k]);
  return 1.0 / (std::exp((d2 - r) / t) + 1.0);
}

Var fermi_dirac(Var Z, std::span<const graphcore::Edge> pairs, double r, double t) {
  if (!(t > 0.0)) throw ContractError("fermi_dirac: t must be positive");
  std::vector<std::size_t> us(pairs.size()), vs(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first >= Z.rows() || pairs[i].second >= Z.rows()) {
      throw ContractError("fermi_dirac: pair references a node outside the embedding");
    }
    us[i] = pairs[i].first;
    vs[i] = pairs[i].second;
  }
  const Var diff = nk::sub(nk::gather_rows(Z, us), nk::gather_rows(Z, vs));
  const Var d2 = nk::row_sq_norm(diff);
  // sigmoid((r - d2) / t) is the same function written without overflow.
  return nk::sigmoid(nk::scale(nk::add_scalar(d2, -r), -1.0 / t));
}

Var nc_head(Var H, Var Wc, Var bc) {
  if (H.cols() != Wc.cols()) throw ShapeError("nc_head: embedding width does not match Wc");
  if (bc.rows() != 1 || bc.cols() != Wc.rows()) throw ShapeError("nc_head: bias must be 1 x classes");
  return nk::add(nk::matmul(H, nk::transpose(Wc)), bc);
}

numkit::Matrix nc_head_forward(const numkit::Matrix& H, const numkit::Matrix& Wc, const numkit::Matrix& bc) {
  numkit::Tape tape(H.mode());
  return nc_head(tape.constant(H), tape.constant(Wc), tape.constant(bc)).value();
}

Var median_pool(Var H, std::span<const std::size_t> graph_of, std::size_t num_graphs) {
  const std::size_t n = H.rows(), d = H.cols();
  if (graph_of.size() != n) throw ShapeError("median_pool: membership length differs from row count");
  std::vector<std::vector<std::size_t>> members(num_graphs);
  for (std::size_t i = 0; i < n; ++i) {
    if (graph_of[i] >= num_graphs) throw ContractError("median_pool: graph index out of range");
    members[graph_of[i]].push_back(i);
  }
  for (std::size_t g = 0; g < num_graphs; ++g) {
    if (members[g].empty()) throw ContractError("median_pool: graph " + std::to_string(g) + " has no nodes");
  }

  // For each output cell, the one or two source rows whose values it averages.
  const auto& x = H.value();
  std::vector<std::size_t> lo_row(num_graphs * d), hi_row(num_graphs * d);
  std::vector<double> out(num_graphs * d);
  std::vector<std::size_t> order;
  for (std::size_t g = 0; g < num_graphs; ++g) {
    const auto& m = members[g];
    for (std::size_t c = 0; c < d; ++c) {
      order = m;
      const std::size_t mid = order.size() / 2;
      auto by_value = [&](std::size_t a, std::size_t b) { return x(a, c) < x(b, c) || (x(a, c) == x(b, c) && a < b); };
      std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mid), order.end(), by_value);
      const std::size_t upper = order[mid];
      std::size_t lower = upper;
      if (order.size() % 2 == 0) {
        lower = *std::max_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mid), by_value);
      }
      lo_row[g * d + c] = lower;
      hi_row[g * d + c] = upper;
      out[g * d + c] = 0.5 * (x(lower, c) + x(upper, c));
    }
  }
  numkit::Tape& tape = H.tape();
  numkit::Matrix value(num_graphs, d, std::move(out), tape.mode());
  const Var parents[] = {H};
  return tape.record(std::move(value), parents, "median_pool",
                     [lo_row = std::move(lo_row), hi_row = std::move(hi_row), d](const numkit::BackwardArgs& args) {
                       auto* gh = args.parent_grads[0];
                       if (!gh) return;
                       for (std::size_t k = 0; k < lo_row.size(); ++k) {
                         const std::size_t c = k % d;
                         const double g = args.grad_out[k];
                         (*gh)[lo_row[k] * d + c] += 0.5 * g;
                         (*gh)[hi_row[k] * d + c] += 0.5 * g;
                       }
                     });
}

numkit::Matrix median_pool_forward(const numkit::Matrix& H, std::span<const std::size_t> graph_of,
                                   std::size_t num_graphs) {
  numkit::Tape tape(H.mode());
  return median_pool(tape.constant(H), graph_of, num_graphs).value();
}

Var readout(Var pooled, Var W1, Var b1, Var W2, Var b2) {
  const Var hidden = nk::relu(nk::add(nk::matmul(pooled, nk::transpose(W1)), b1));
  return nk::add(nk::matmul(hidden, nk::transpose(W2)), b2);
}

}  // namespace shgcn::layers
