#pragma once

#include <vector>

#include "shgcn/numkit/matrix.hpp"
#include "shgcn/numkit/precision.hpp"

namespace shgcn::hypgeo {

using numkit::PrecisionMode;
using Vec = std::vector<double>;

// Point of the ball D^n_c = {x : c|x|^2 < 1}. Operations evaluated in reduced
// precision may legitimately produce a point whose rounded norm reaches the
// boundary; inside() reports that and log0/poincare_dist reject it.
struct PoincarePoint {
  Vec coords;
  double c = 1.0;

  std::size_t dim() const noexcept { return coords.size(); }
  bool inside() const noexcept;
  // Conformal factor 2 / (1 - c|x|^2).
  double conformal_factor() const;
};

// Vector of the tangent space at the origin, identified with R^n.
struct TangentVector {
  Vec coords;
  double c = 1.0;

  std::size_t dim() const noexcept { return coords.size(); }
};

PoincarePoint origin(std::size_t dim, double c);

// Default boundary margin used after exp/log maps: 1e-3 in half precision,
// 1e-5 otherwise.
double default_projection_eps(PrecisionMode mode) noexcept;

// Moebius addition. Curvature 0 is accepted and reduces to vector addition.
// If rounding lands the result on or outside the boundary it is projected
// back with default_projection_eps(mode).
PoincarePoint mobius_add(const PoincarePoint& x, const PoincarePoint& y,
                         PrecisionMode mode = PrecisionMode::Double);

// Additive inverse in the gyrogroup: -x.
PoincarePoint mobius_neg(const PoincarePoint& x);

// Exponential map at the origin; zero maps to the origin.
PoincarePoint exp0(const TangentVector& v, PrecisionMode mode = PrecisionMode::Double);

// Logarithmic map at the origin. Throws DomainError when sqrt(c)|y| rounds to
// 1 or beyond, which is how boundary collapse shows up.
TangentVector log0(const PoincarePoint& y, PrecisionMode mode = PrecisionMode::Double);

// Geodesic distance (2/sqrt(c)) artanh(sqrt(c) |-x (+) y|).
double poincare_dist(const PoincarePoint& x, const PoincarePoint& y,
                     PrecisionMode mode = PrecisionMode::Double);

// exp0(M log0(x)); a zero image maps to the origin.
PoincarePoint mobius_matvec(const numkit::Matrix& m, const PoincarePoint& x,
                            PrecisionMode mode = PrecisionMode::Double);

// r (x) x = exp0(r log0(x)).
PoincarePoint mobius_scalar(double r, const PoincarePoint& x, PrecisionMode mode = PrecisionMode::Double);

// Clip onto radius (1 - eps)/sqrt(c) when sqrt(c)|x| > 1 - eps; interior
// points are returned unchanged.
PoincarePoint project(const Vec& x, double c, double eps, PrecisionMode mode = PrecisionMode::Double);

}  // namespace shgcn::hypgeo
