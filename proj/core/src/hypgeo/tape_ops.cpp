#include "shgcn/hypgeo/tape_ops.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/kernels.hpp"
#include "shgcn/hypgeo/poincare.hpp"

namespace shgcn::hypgeo::ops {
namespace {

using numkit::BackwardArgs;
using numkit::Matrix;
using numkit::Tape;

double curvature_of(Var c) {
  if (c.rows() != 1 || c.cols() != 1) throw ShapeError("curvature node must be 1x1");
  const double v = c.value().item();
  if (!(v > 0.0) || !std::isfinite(v)) throw ContractError("curvature must be positive, got " + std::to_string(v));
  return v;
}

std::span<const double> row_of(std::span<const double> data, std::size_t i, std::size_t d) {
  return data.subspan(i * d, d);
}

// d/du [tanh(u)/u]
double tanh_ratio_deriv(double u) {
  if (u < 1e-4) return -2.0 * u / 3.0;
  const double t = std::tanh(u);
  return (u * (1.0 - t * t) - t) / (u * u);
}

// d/dr [artanh(r)/r]
double artanh_ratio_deriv(double r) {
  if (r < 1e-4) return 2.0 * r / 3.0;
  return (r / (1.0 - r * r) - std::atanh(r)) / (r * r);
}

}  // namespace

Var exp0(Var v, Var c) {
  Tape& tape = v.tape();
  const double cv = curvature_of(c);
  const std::size_t n = v.rows(), d = v.cols();
  const auto x = v.value().data();
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    kernels::exp0(row_of(x, i, d), cv, tape.mode(), std::span<double>(out).subspan(i * d, d));
  const Var parents[] = {v, c};
  return tape.record(Matrix(n, d, std::move(out), tape.mode()), parents, "exp0",
                     [iv = v.id(), ic = c.id(), n, d](const BackwardArgs& args) {
                       const auto xs = args.tape.value(iv).data();
                       const double cv = args.tape.value(ic).item();
                       const double sc = std::sqrt(cv);
                       auto* gv = args.parent_grads[0];
                       auto* gc = args.parent_grads[1];
                       for (std::size_t i = 0; i < n; ++i) {
                         const auto row = row_of(xs, i, d);
                         const auto g = args.grad_out.subspan(i * d, d);
                         const double nv = kernels::norm(row);
                         if (nv == 0.0) {
                           if (gv)
                             for (std::size_t j = 0; j < d; ++j) (*gv)[i * d + j] += g[j];
                           continue;
                         }
                         const double u = sc * nv;
                         const double f = std::tanh(u) / u;
                         const double fp = tanh_ratio_deriv(u);
                         const double gdotv = kernels::dot(g, row);
                         if (gv) {
                           const double k = fp * gdotv * sc / nv;
                           for (std::size_t j = 0; j < d; ++j) (*gv)[i * d + j] += f * g[j] + k * row[j];
                         }
                         if (gc) (*gc)[0] += fp * gdotv * nv / (2.0 * sc);
                       }
                     });
}

Var log0(Var y, Var c) {
  Tape& tape = y.tape();
  const double cv = curvature_of(c);
  const std::size_t n = y.rows(), d = y.cols();
  const auto x = y.value().data();
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!kernels::log0(row_of(x, i, d), cv, tape.mode(), std::span<double>(out).subspan(i * d, d))) {
      throw DomainError("log0: row " + std::to_string(i) + " lies on or beyond the ball boundary");
    }
  }
  const Var parents[] = {y, c};
  return tape.record(Matrix(n, d, std::move(out), tape.mode()), parents, "log0",
                     [iy = y.id(), ic = c.id(), n, d](const BackwardArgs& args) {
                       const auto ys = args.tape.value(iy).data();
                       const double cv = args.tape.value(ic).item();
                       const double sc = std::sqrt(cv);
                       auto* gy = args.parent_grads[0];
                       auto* gc = args.parent_grads[1];
                       for (std::size_t i = 0; i < n; ++i) {
                         const auto row = row_of(ys, i, d);
                         const auto g = args.grad_out.subspan(i * d, d);
                         const double ny = kernels::norm(row);
                         if (ny == 0.0) {
                           if (gy)
                             for (std::size_t j = 0; j < d; ++j) (*gy)[i * d + j] += g[j];
                           continue;
                         }
                         const double r = sc * ny;
                         const double f = std::atanh(r) / r;
                         const double fp = artanh_ratio_deriv(r);
                         const double gdoty = kernels::dot(g, row);
                         if (gy) {
                           const double k = fp * gdoty * sc / ny;
                           for (std::size_t j = 0; j < d; ++j) (*gy)[i * d + j] += f * g[j] + k * row[j];
                         }
                         if (gc) (*gc)[0] += fp * gdoty * ny / (2.0 * sc);
                       }
                     });
}

Var mobius_add(Var x, Var y, Var c) {
  Tape& tape = x.tape();
  const double cv = curvature_of(c);
  const std::size_t n = x.rows(), d = x.cols();
  if (y.cols() != d || (y.rows() != n && y.rows() != 1)) {
    throw ShapeError("mobius_add: y must be " + std::to_string(n) + "x" + std::to_string(d) + " or 1x" +
                     std::to_string(d));
  }
  const bool broadcast = y.rows() == 1 && n != 1;
  const auto xs = x.value().data();
  const auto ys = y.value().data();
  const double eps = default_projection_eps(tape.mode());
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto o = std::span<double>(out).subspan(i * d, d);
    kernels::mobius_add_raw(row_of(xs, i, d), row_of(ys, broadcast ? 0 : i, d), cv, tape.mode(), o);
    if (!(kernels::scaled_norm(o, cv, tape.mode()) < 1.0)) kernels::project(o, cv, eps, tape.mode(), o);
  }
  const std::size_t self = tape.size();
  const Var parents[] = {x, y, c};
  // The rare rounding-induced projection inside the forward is treated as the
  // identity in the backward pass.
  return tape.record(
      Matrix(n, d, std::move(out), tape.mode()), parents, "mobius_add",
      [ix = x.id(), iy = y.id(), ic = c.id(), self, n, d, broadcast](const BackwardArgs& args) {
        const auto xs = args.tape.value(ix).data();
        const auto ys = args.tape.value(iy).data();
        const auto outs = args.tape.value(self).data();
        const double cv = args.tape.value(ic).item();
        auto* gx = args.parent_grads[0];
        auto* gy = args.parent_grads[1];
        auto* gc = args.parent_grads[2];
        std::vector<double> gn(d);
        for (std::size_t i = 0; i < n; ++i) {
          const auto xr = row_of(xs, i, d);
          const std::size_t yi = broadcast ? 0 : i;
          const auto yr = row_of(ys, yi, d);
          const auto orow = row_of(outs, i, d);
          const auto g = args.grad_out.subspan(i * d, d);
          const double xy = kernels::dot(xr, yr);
          const double x2 = kernels::dot(xr, xr);
          const double y2 = kernels::dot(yr, yr);
          const double a = 1.0 + 2.0 * cv * xy + cv * y2;
          const double b = 1.0 - cv * x2;
          const double den = 1.0 + 2.0 * cv * xy + cv * cv * x2 * y2;
          // out = N / den with N = a x + b y
          for (std::size_t j = 0; j < d; ++j) gn[j] = g[j] / den;
          const double gd = -kernels::dot(g, orow) / den;
          const double gn_x = kernels::dot(gn, xr);
          const double gn_y = kernels::dot(gn, yr);
          if (gx) {
            for (std::size_t j = 0; j < d; ++j) {
              (*gx)[i * d + j] += a * gn[j] + gn_x * 2.0 * cv * yr[j] - gn_y * 2.0 * cv * xr[j] +
                                  gd * (2.0 * cv * yr[j] + 2.0 * cv * cv * y2 * xr[j]);
            }
          }
          if (gy) {
            for (std::size_t j = 0; j < d; ++j) {
              (*gy)[yi * d + j] += b * gn[j] + gn_x * (2.0 * cv * xr[j] + 2.0 * cv * yr[j]) +
                                   gd * (2.0 * cv * xr[j] + 2.0 * cv * cv * x2 * yr[j]);
            }
          }
          if (gc) {
            (*gc)[0] += gn_x * (2.0 * xy + y2) - gn_y * x2 + gd * (2.0 * xy + 2.0 * cv * x2 * y2);
          }
        }
      });
}

Var project(Var x, Var c, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ContractError("project: eps must lie in (0, 1)");
  Tape& tape = x.tape();
  const double cv = curvature_of(c);
  const std::size_t n = x.rows(), d = x.cols();
  const auto xs = x.value().data();
  std::vector<double> out(n * d);
  std::vector<char> clipped(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    clipped[i] = kernels::project(row_of(xs, i, d), cv, eps, tape.mode(), std::span<double>(out).subspan(i * d, d));
  }
  const Var parents[] = {x, c};
  return tape.record(Matrix(n, d, std::move(out), tape.mode()), parents, "project",
                     [ix = x.id(), ic = c.id(), n, d, eps, clipped = std::move(clipped)](const BackwardArgs& args) {
                       const auto xs = args.tape.value(ix).data();
                       const double cv = args.tape.value(ic).item();
                       auto* gx = args.parent_grads[0];
                       auto* gc = args.parent_grads[1];
                       for (std::size_t i = 0; i < n; ++i) {
                         const auto g = args.grad_out.subspan(i * d, d);
                         if (!clipped[i]) {
                           if (gx)
                             for (std::size_t j = 0; j < d; ++j) (*gx)[i * d + j] += g[j];
                           continue;
                         }
                         const auto row = row_of(xs, i, d);
                         const double nx = kernels::norm(row);
                         const double delta = (1.0 - eps) / std::sqrt(cv);
                         double g_hat = 0.0;
                         for (std::size_t j = 0; j < d; ++j) g_hat += g[j] * row[j] / nx;
                         if (gx) {
                           for (std::size_t j = 0; j < d; ++j)
                             (*gx)[i * d + j] += delta / nx * (g[j] - g_hat * row[j] / nx);
                         }
                         if (gc) (*gc)[0] += g_hat * -0.5 * (1.0 - eps) * std::pow(cv, -1.5);
                       }
                     });
}

}  // namespace shgcn::hypgeo::ops
