#pragma once

#include <vector>

#include "shgcn/numkit/precision.hpp"

namespace shgcn::hypgeo {

// Point of the hyperboloid {x in R^{d+1} : <x,x>_L = -K, x_0 > 0}.
struct LorentzPoint {
  std::vector<double> coords;
  double K = 1.0;

  std::size_t ambient_dim() const noexcept { return coords.size(); }
  // |<x,x>_L + K| <= tol * K and x_0 > 0.
  bool on_hyperboloid(double tol = 1e-9) const;
};

// -x_0 y_0 + x_1 y_1 + ... + x_d y_d
double minkowski_dot(const std::vector<double>& x, const std::vector<double>& y,
                     numkit::PrecisionMode mode = numkit::PrecisionMode::Double);

// North pole (sqrt(K), 0, ..., 0) in ambient dimension d + 1.
LorentzPoint lorentz_origin(std::size_t d, double K);

// Exponential map of the tangent vector (0, v) at the north pole.
LorentzPoint lorentz_exp0(const std::vector<double>& v, double K,
                          numkit::PrecisionMode mode = numkit::PrecisionMode::Double);

// Distance from the north pole, sqrt(K) arcosh(-<o, x>_L / K); arcosh is
// evaluated as ln(a + sqrt((a-1)(a+1))) with every step rounded to mode, so
// in half precision the intermediate product overflows for large distances.
// Saturation returns +inf and raises the numkit overflow flag. Throws
// DomainError when the arcosh argument falls below 1 beyond tolerance.
double lorentz_dist0(const LorentzPoint& x, numkit::PrecisionMode mode = numkit::PrecisionMode::Double);

}  // namespace shgcn::hypgeo
