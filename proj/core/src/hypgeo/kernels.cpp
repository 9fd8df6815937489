#include "shgcn/hypgeo/kernels.hpp"

#include <cmath>

namespace shgcn::hypgeo::kernels {

using numkit::round_to_precision;

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

double scaled_norm(std::span<const double> x, double c, PrecisionMode mode) noexcept {
  return round_to_precision(std::sqrt(c) * norm(x), mode);
}

void exp0(std::span<const double> v, double c, PrecisionMode mode, std::span<double> out) noexcept {
  const double u = scaled_norm(v, c, mode);
  if (u == 0.0) {
    for (double& o : out) o = 0.0;
    return;
  }
  // tanh(u) times the unit direction: an axis-aligned v maps exactly onto
  // the rounded tanh, so saturation is not masked by a last-ulp wobble.
  const double sc = std::sqrt(c);
  const double t = std::tanh(u) / sc;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = round_to_precision(t * (sc * v[i] / u), mode);
}

bool log0(std::span<const double> y, double c, PrecisionMode mode, std::span<double> out) noexcept {
  const double r = scaled_norm(y, c, mode);
  if (!(r < 1.0)) return false;
  if (r == 0.0) {
    for (double& o : out) o = 0.0;
    return true;
  }
  const double factor = std::atanh(r) / r;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = round_to_precision(factor * y[i], mode);
  return true;
}

void mobius_add_raw(std::span<const double> x, std::span<const double> y, double c, PrecisionMode mode,
                    std::span<double> out) noexcept {
  const double xy = dot(x, y);
  const double x2 = dot(x, x);
  const double y2 = dot(y, y);
  const double a = 1.0 + 2.0 * c * xy + c * y2;
  const double b = 1.0 - c * x2;
  const double den = 1.0 + 2.0 * c * xy + c * c * x2 * y2;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = round_to_precision((a * x[i] + b * y[i]) / den, mode);
}

bool project(std::span<const double> x, double c, double eps, PrecisionMode mode,
             std::span<double> out) noexcept {
  const double limit = round_to_precision(1.0 - eps, mode);
  const double r = scaled_norm(x, c, mode);
  if (!(r > limit)) {
    if (out.data() != x.data())
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
    return false;
  }
  const double s = (1.0 - eps) / (std::sqrt(c) * norm(x));
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = round_to_precision(x[i] * s, mode);
  return true;
}

}  // namespace shgcn::hypgeo::kernels
