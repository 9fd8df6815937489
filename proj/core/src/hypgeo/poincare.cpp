#include "shgcn/hypgeo/poincare.hpp"

#include <cmath>
#include <string>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/kernels.hpp"

namespace shgcn::hypgeo {
namespace {

void require_positive_curvature(double c, const char* op) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ContractError(std::string(op) + ": curvature must be positive, got " + std::to_string(c));
  }
}

void require_compatible(const PoincarePoint& x, const PoincarePoint& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw ContractError(std::string(op) + ": dimension mismatch " + std::to_string(x.dim()) + " vs " +
                        std::to_string(y.dim()));
  }
  if (x.c != y.c) throw ContractError(std::string(op) + ": curvature mismatch");
}

Vec rounded(const Vec& v, PrecisionMode mode) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = numkit::round_to_precision(v[i], mode);
  return out;
}

}  // namespace

bool PoincarePoint::inside() const noexcept { return c * kernels::dot(coords, coords) < 1.0; }

double PoincarePoint::conformal_factor() const {
  const double s = 1.0 - c * kernels::dot(coords, coords);
  if (!(s > 0.0)) throw DomainError("conformal_factor: point is not inside the ball");
  return 2.0 / s;
}

PoincarePoint origin(std::size_t dim, double c) { return {Vec(dim, 0.0), c}; }

double default_projection_eps(PrecisionMode mode) noexcept {
  return mode == PrecisionMode::Half ? 1e-3 : 1e-5;
}

PoincarePoint mobius_add(const PoincarePoint& x, const PoincarePoint& y, PrecisionMode mode) {
  require_compatible(x, y, "mobius_add");
  if (!(x.c >= 0.0)) throw ContractError("mobius_add: curvature must be non-negative");
  const Vec xs = rounded(x.coords, mode);
  const Vec ys = rounded(y.coords, mode);
  PoincarePoint out{Vec(x.dim()), x.c};
  kernels::mobius_add_raw(xs, ys, x.c, mode, out.coords);
  if (x.c > 0.0 && !(kernels::scaled_norm(out.coords, x.c, mode) < 1.0)) {
    kernels::project(out.coords, x.c, default_projection_eps(mode), mode, out.coords);
  }
  return out;
}

PoincarePoint mobius_neg(const PoincarePoint& x) {
  PoincarePoint out = x;
  for (double& v : out.coords) v = -v;
  return out;
}

PoincarePoint exp0(const TangentVector& v, PrecisionMode mode) {
  require_positive_curvature(v.c, "exp0");
  const Vec vs = rounded(v.coords, mode);
  PoincarePoint out{Vec(v.dim()), v.c};
  kernels::exp0(vs, v.c, mode, out.coords);
  return out;
}

TangentVector log0(const PoincarePoint& y, PrecisionMode mode) {
  require_positive_curvature(y.c, "log0");
  const Vec ys = rounded(y.coords, mode);
  TangentVector out{Vec(y.dim()), y.c};
  if (!kernels::log0(ys, y.c, mode, out.coords)) {
    throw DomainError("log0: point lies on or beyond the ball boundary (sqrt(c)|y| = " +
                      std::to_string(kernels::scaled_norm(ys, y.c, mode)) + ")");
  }
  return out;
}

double poincare_dist(const PoincarePoint& x, const PoincarePoint& y, PrecisionMode mode) {
  require_compatible(x, y, "poincare_dist");
  require_positive_curvature(x.c, "poincare_dist");
  const Vec xs = rounded(mobius_neg(x).coords, mode);
  const Vec ys = rounded(y.coords, mode);
  Vec w(x.dim());
  kernels::mobius_add_raw(xs, ys, x.c, mode, w);
  const double r = kernels::scaled_norm(w, x.c, mode);
  if (!(r < 1.0)) throw DomainError("poincare_dist: argument reaches the ball boundary");
  return numkit::round_to_precision(2.0 / std::sqrt(x.c) * std::atanh(r), mode);
}

PoincarePoint mobius_matvec(const numkit::Matrix& m, const PoincarePoint& x, PrecisionMode mode) {
  if (m.cols() != x.dim()) {
    throw ContractError("mobius_matvec: matrix has " + std::to_string(m.cols()) + " columns, point has dimension " +
                        std::to_string(x.dim()));
  }
  const TangentVector v = log0(x, mode);
  Vec mv(m.rows(), 0.0);
  bool all_zero = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v.coords[j];
    mv[i] = numkit::round_to_precision(acc, mode);
    all_zero = all_zero && mv[i] == 0.0;
  }
  if (all_zero) return origin(m.rows(), x.c);
  return exp0(TangentVector{std::move(mv), x.c}, mode);
}

PoincarePoint mobius_scalar(double r, const PoincarePoint& x, PrecisionMode mode) {
  TangentVector v = log0(x, mode);
  for (double& e : v.coords) e = numkit::round_to_precision(r * e, mode);
  return exp0(v, mode);
}

PoincarePoint project(const Vec& x, double c, double eps, PrecisionMode mode) {
  require_positive_curvature(c, "project");
  if (!(eps > 0.0 && eps < 1.0)) throw ContractError("project: eps must lie in (0, 1)");
  for (double v : x)
    if (!std::isfinite(v)) throw ContractError("project: non-finite coordinate");
  PoincarePoint out{Vec(x.size()), c};
  kernels::project(rounded(x, mode), c, eps, mode, out.coords);
  return out;
}

}  // namespace shgcn::hypgeo
