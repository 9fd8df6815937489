#include "shgcn/numkit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shgcn/error.hpp"

namespace shgcn::numkit::ops {
namespace {

std::string shape_of(Var v) {
  return std::to_string(v.rows()) + "x" + std::to_string(v.cols());
}

void require_same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractError("operands recorded on different tapes");
}

Matrix make(Tape& tape, std::size_t r, std::size_t c, std::vector<double> data) {
  return Matrix(r, c, std::move(data), tape.mode());
}

enum class Broadcast { Same, Row, Scalar };

Broadcast classify(Var a, Var b, const char* op) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return Broadcast::Same;
  if (b.rows() == 1 && b.cols() == 1) return Broadcast::Scalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return Broadcast::Row;
  throw ShapeError(std::string(op) + ": cannot broadcast " + shape_of(b) + " onto " + shape_of(a));
}

std::size_t bindex(Broadcast mode, std::size_t i, std::size_t cols) {
  switch (mode) {
    case Broadcast::Same: return i;
    case Broadcast::Row: return i % cols;
    case Broadcast::Scalar: return 0;
  }
  return i;
}

// Elementwise map with derivative expressed through input x and output y.
template <typename F, typename DF>
Var unary(Var a, const char* rule, F f, DF df) {
  Tape& tape = a.tape();
  const auto x = a.value().data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  Matrix value = make(tape, a.rows(), a.cols(), std::move(out));
  const std::size_t self = tape.size();
  const Var parents[] = {a};
  return tape.record(std::move(value), parents, rule, [ia = a.id(), self, df](const BackwardArgs& args) {
    if (!args.parent_grads[0]) return;
    const auto xs = args.tape.value(ia).data();
    const auto ys = args.tape.value(self).data();
    auto& g = *args.parent_grads[0];
    for (std::size_t i = 0; i < xs.size(); ++i) g[i] += args.grad_out[i] * df(xs[i], ys[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + shape_of(a) + " x " + shape_of(b) + ")");
  }
  Tape& tape = a.tape();
  Matrix value = numkit::matmul(a.value(), b.value());
  const Var parents[] = {a, b};
  return tape.record(std::move(value), parents, "matmul", [ia = a.id(), ib = b.id()](const BackwardArgs& args) {
    const Matrix& A = args.tape.value(ia);
    const Matrix& B = args.tape.value(ib);
    const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
    const auto g = args.grad_out;
    if (auto* ga = args.parent_grads[0]) {
      // dA = G * B^T
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += g[i * m + j] * B(p, j);
          (*ga)[i * k + p] += acc;
        }
    }
    if (auto* gb = args.parent_grads[1]) {
      // dB = A^T * G
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = A(i, p);
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < m; ++j) (*gb)[p * m + j] += aip * g[i * m + j];
        }
    }
  });
}

Var transpose(Var a) {
  Tape& tape = a.tape();
  Matrix value = a.value().transpose();
  const Var parents[] = {a};
  return tape.record(std::move(value), parents, "transpose", [r = a.rows(), c = a.cols()](const BackwardArgs& args) {
    if (auto* ga = args.parent_grads[0])
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) (*ga)[i * c + j] += args.grad_out[j * r + i];
  });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  const Broadcast mode = classify(a, b, "add");
  Tape& tape = a.tape();
  const auto x = a.value().data();
  const auto y = b.value().data();
  const std::size_t cols = a.cols();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[bindex(mode, i, cols)];
  const Var parents[] = {a, b};
  return tape.record(make(tape, a.rows(), cols, std::move(out)), parents, "add",
                     [mode, cols](const BackwardArgs& args) {
                       const auto g = args.grad_out;
                       if (auto* ga = args.parent_grads[0])
                         for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
                       if (auto* gb = args.parent_grads[1])
                         for (std::size_t i = 0; i < g.size(); ++i) (*gb)[bindex(mode, i, cols)] += g[i];
                     });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b);
  const Broadcast mode = classify(a, b, "sub");
  Tape& tape = a.tape();
  const auto x = a.value().data();
  const auto y = b.value().data();
  const std::size_t cols = a.cols();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[bindex(mode, i, cols)];
  const Var parents[] = {a, b};
  return tape.record(make(tape, a.rows(), cols, std::move(out)), parents, "sub",
                     [mode, cols](const BackwardArgs& args) {
                       const auto g = args.grad_out;
                       if (auto* ga = args.parent_grads[0])
                         for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
                       if (auto* gb = args.parent_grads[1])
                         for (std::size_t i = 0; i < g.size(); ++i) (*gb)[bindex(mode, i, cols)] -= g[i];
                     });
}

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  if (classify(a, b, "mul") != Broadcast::Same) throw ShapeError("mul: shapes must match");
  Tape& tape = a.tape();
  const auto x = a.value().data();
  const auto y = b.value().data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  const Var parents[] = {a, b};
  return tape.record(make(tape, a.rows(), a.cols(), std::move(out)), parents, "mul",
                     [ia = a.id(), ib = b.id()](const BackwardArgs& args) {
                       const auto xs = args.tape.value(ia).data();
                       const auto ys = args.tape.value(ib).data();
                       const auto g = args.grad_out;
                       if (auto* ga = args.parent_grads[0])
                         for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * ys[i];
                       if (auto* gb = args.parent_grads[1])
                         for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * xs[i];
                     });
}

Var mul_col(Var a, Var s) {
  require_same_tape(a, s);
  if (s.cols() != 1 || s.rows() != a.rows()) {
    throw ShapeError("mul_col: expected " + std::to_string(a.rows()) + "x1 scale, got " + shape_of(s));
  }
  Tape& tape = a.tape();
  const std::size_t n = a.rows(), d = a.cols();
  const auto x = a.value().data();
  const auto sv = s.value().data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = x[i * d + j] * sv[i];
  const Var parents[] = {a, s};
  return tape.record(make(tape, n, d, std::move(out)), parents, "mul_col",
                     [ia = a.id(), is = s.id(), n, d](const BackwardArgs& args) {
                       const auto xs = args.tape.value(ia).data();
                       const auto ss = args.tape.value(is).data();
                       const auto g = args.grad_out;
                       for (std::size_t i = 0; i < n; ++i) {
                         double dot = 0.0;
                         for (std::size_t j = 0; j < d; ++j) {
                           if (auto* ga = args.parent_grads[0]) (*ga)[i * d + j] += g[i * d + j] * ss[i];
                           dot += g[i * d + j] * xs[i * d + j];
                         }
                         if (auto* gs = args.parent_grads[1]) (*gs)[i] += dot;
                       }
                     });
}

Var mul_scalar(Var a, Var s) {
  require_same_tape(a, s);
  if (s.rows() != 1 || s.cols() != 1) throw ShapeError("mul_scalar: scale must be 1x1");
  Tape& tape = a.tape();
  const double sv = s.value().item();
  const auto x = a.value().data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * sv;
  const Var parents[] = {a, s};
  return tape.record(make(tape, a.rows(), a.cols(), std::move(out)), parents, "mul_scalar",
                     [ia = a.id(), is = s.id()](const BackwardArgs& args) {
                       const auto xs = args.tape.value(ia).data();
                       const double sv = args.tape.value(is).item();
                       const auto g = args.grad_out;
                       double dot = 0.0;
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         if (auto* ga = args.parent_grads[0]) (*ga)[i] += g[i] * sv;
                         dot += g[i] * xs[i];
                       }
                       if (auto* gs = args.parent_grads[1]) (*gs)[0] += dot;
                     });
}

Var scale(Var a, double s) {
  return unary(a, "scale", [s](double x) { return x * s; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, "add_scalar", [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var neg(Var a) { return scale(a, -1.0); }

Var tanh(Var a) {
  return unary(a, "tanh", [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var softplus(Var a) {
  return unary(
      a, "softplus",
      [](double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); },
      [](double x, double) { return 1.0 / (1.0 + std::exp(-x)); });
}

Var sigmoid(Var a) {
  return unary(
      a, "sigmoid",
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var exp(Var a) {
  return unary(a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  return unary(a, "log", [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var abs(Var a) {
  return unary(a, "abs", [](double x) { return std::fabs(x); },
               [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var square(Var a) {
  return unary(a, "square", [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var clamp(Var a, double lo, double hi) {
  return unary(a, "clamp", [lo, hi](double x) { return std::clamp(x, lo, hi); },
               [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Var row_sq_norm(Var a) {
  Tape& tape = a.tape();
  const std::size_t n = a.rows(), d = a.cols();
  const auto x = a.value().data();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i] += x[i * d + j] * x[i * d + j];
  const Var parents[] = {a};
  return tape.record(make(tape, n, 1, std::move(out)), parents, "row_sq_norm",
                     [ia = a.id(), n, d](const BackwardArgs& args) {
                       auto* ga = args.parent_grads[0];
                       if (!ga) return;
                       const auto xs = args.tape.value(ia).data();
                       for (std::size_t i = 0; i < n; ++i)
                         for (std::size_t j = 0; j < d; ++j)
                           (*ga)[i * d + j] += 2.0 * args.grad_out[i] * xs[i * d + j];
                     });
}

Var row_norm(Var a) {
  Tape& tape = a.tape();
  const std::size_t n = a.rows(), d = a.cols();
  const auto x = a.value().data();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += x[i * d + j] * x[i * d + j];
    out[i] = std::sqrt(s);
  }
  const std::size_t self = tape.size();
  const Var parents[] = {a};
  return tape.record(make(tape, n, 1, std::move(out)), parents, "row_norm",
                     [ia = a.id(), self, n, d](const BackwardArgs& args) {
                       auto* ga = args.parent_grads[0];
                       if (!ga) return;
                       const auto xs = args.tape.value(ia).data();
                       const auto norms = args.tape.value(self).data();
                       for (std::size_t i = 0; i < n; ++i) {
                         if (norms[i] == 0.0) continue;
                         const double k = args.grad_out[i] / norms[i];
                         for (std::size_t j = 0; j < d; ++j) (*ga)[i * d + j] += k * xs[i * d + j];
                       }
                     });
}

Var row_dot(Var a, Var b) {
  require_same_tape(a, b);
  if (classify(a, b, "row_dot") != Broadcast::Same) throw ShapeError("row_dot: shapes must match");
  Tape& tape = a.tape();
  const std::size_t n = a.rows(), d = a.cols();
  const auto x = a.value().data();
  const auto y = b.value().data();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i] += x[i * d + j] * y[i * d + j];
  const Var parents[] = {a, b};
  return tape.record(make(tape, n, 1, std::move(out)), parents, "row_dot",
                     [ia = a.id(), ib = b.id(), n, d](const BackwardArgs& args) {
                       const auto xs = args.tape.value(ia).data();
                       const auto ys = args.tape.value(ib).data();
                       for (std::size_t i = 0; i < n; ++i)
                         for (std::size_t j = 0; j < d; ++j) {
                           if (auto* ga = args.parent_grads[0]) (*ga)[i * d + j] += args.grad_out[i] * ys[i * d + j];
                           if (auto* gb = args.parent_grads[1]) (*gb)[i * d + j] += args.grad_out[i] * xs[i * d + j];
                         }
                     });
}

Var sum(Var a) {
  Tape& tape = a.tape();
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const Var parents[] = {a};
  return tape.record(make(tape, 1, 1, {s}), parents, "sum", [](const BackwardArgs& args) {
    if (auto* ga = args.parent_grads[0])
      for (double& g : *ga) g += args.grad_out[0];
  });
}

Var mean(Var a) {
  if (a.value().empty()) throw ContractError("mean of an empty matrix");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var gather_rows(Var a, std::span<const std::size_t> rows) {
  Tape& tape = a.tape();
  const std::size_t d = a.cols();
  const auto x = a.value().data();
  std::vector<double> out(rows.size() * d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= a.rows()) throw ShapeError("gather_rows: row index out of range");
    std::copy_n(x.data() + rows[r] * d, d, out.data() + r * d);
  }
  const Var parents[] = {a};
  return tape.record(make(tape, rows.size(), d, std::move(out)), parents, "gather_rows",
                     [idx = std::vector<std::size_t>(rows.begin(), rows.end()), d](const BackwardArgs& args) {
                       auto* ga = args.parent_grads[0];
                       if (!ga) return;
                       for (std::size_t r = 0; r < idx.size(); ++r)
                         for (std::size_t j = 0; j < d; ++j) (*ga)[idx[r] * d + j] += args.grad_out[r * d + j];
                     });
}

Var softmax_cross_entropy(Var logits, std::span<const int> labels) {
  const std::size_t n = logits.rows(), k = logits.cols();
  if (labels.size() != n) throw ShapeError("softmax_cross_entropy: one label per row required");
  if (n == 0) throw ContractError("softmax_cross_entropy: empty batch");
  Tape& tape = logits.tape();
  const auto z = logits.value().data();
  std::vector<double> probs(n * k);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
      throw ContractError("softmax_cross_entropy: label " + std::to_string(labels[i]) +
                          " outside [0, " + std::to_string(k) + ")");
    }
    const double* row = z.data() + i * k;
    const double mx = *std::max_element(row, row + k);
    double denom = 0.0;
    for (std::size_t j = 0; j < k; ++j) denom += std::exp(row[j] - mx);
    for (std::size_t j = 0; j < k; ++j) probs[i * k + j] = std::exp(row[j] - mx) / denom;
    loss += -(row[labels[i]] - mx - std::log(denom));
  }
  loss /= static_cast<double>(n);
  const Var parents[] = {logits};
  return tape.record(make(tape, 1, 1, {loss}), parents, "softmax_cross_entropy",
                     [probs = std::move(probs), lab = std::vector<int>(labels.begin(), labels.end()), n,
                      k](const BackwardArgs& args) {
                       auto* ga = args.parent_grads[0];
                       if (!ga) return;
                       const double s = args.grad_out[0] / static_cast<double>(n);
                       for (std::size_t i = 0; i < n; ++i)
                         for (std::size_t j = 0; j < k; ++j) {
                           const double target = static_cast<int>(j) == lab[i] ? 1.0 : 0.0;
                           (*ga)[i * k + j] += s * (probs[i * k + j] - target);
                         }
                     });
}

}  // namespace shgcn::numkit::ops
