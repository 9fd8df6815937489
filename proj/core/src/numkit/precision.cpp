#include "shgcn/numkit/precision.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "shgcn/error.hpp"

namespace shgcn::numkit {
namespace {

thread_local bool g_overflow = false;

double saturate(double x) noexcept {
  g_overflow = true;
  return std::copysign(std::numeric_limits<double>::infinity(), x);
}

// binary16: 11-bit significand, normal exponents in [-14, 15], subnormal
// spacing 2^-24. Scaling by a power of two is exact, so nearbyint on the
// scaled value performs the ties-to-even rounding directly.
double round_half(double x) noexcept {
  if (!std::isfinite(x) || x == 0.0) return x;
  const double ax = std::fabs(x);
  int e = 0;
  std::frexp(ax, &e);
  const int exponent = std::max(e - 1, -14);
  const double ulp = std::ldexp(1.0, exponent - 10);
  const double r = std::nearbyint(ax / ulp) * ulp;
  if (r > 65504.0) return saturate(x);
  return std::copysign(r, x);
}

double round_single(double x) noexcept {
  if (!std::isfinite(x)) return x;
  // Midpoint between FLT_MAX and 2^128: anything at or past it rounds to inf.
  constexpr double kOverflow = 340282356779733661637539395458142568448.0;
  if (std::fabs(x) >= kOverflow) return saturate(x);
  return static_cast<double>(static_cast<float>(x));
}

}  // namespace

double machine_epsilon(PrecisionMode mode) noexcept {
  switch (mode) {
    case PrecisionMode::Half: return 0x1p-10;
    case PrecisionMode::Single: return 0x1p-23;
    case PrecisionMode::Double: return 0x1p-52;
  }
  return 0x1p-52;
}

double max_finite(PrecisionMode mode) noexcept {
  switch (mode) {
    case PrecisionMode::Half: return 65504.0;
    case PrecisionMode::Single: return static_cast<double>(std::numeric_limits<float>::max());
    case PrecisionMode::Double: return std::numeric_limits<double>::max();
  }
  return std::numeric_limits<double>::max();
}

double round_to_precision(double x, PrecisionMode mode) noexcept {
  switch (mode) {
    case PrecisionMode::Half: return round_half(x);
    case PrecisionMode::Single: return round_single(x);
    case PrecisionMode::Double: return x;
  }
  return x;
}

bool overflow_flag() noexcept { return g_overflow; }
void clear_overflow_flag() noexcept { g_overflow = false; }

std::string_view to_string(PrecisionMode mode) noexcept {
  switch (mode) {
    case PrecisionMode::Half: return "half";
    case PrecisionMode::Single: return "single";
    case PrecisionMode::Double: return "double";
  }
  return "double";
}

PrecisionMode parse_precision(std::string_view name) {
  if (name == "half" || name == "float16" || name == "fp16") return PrecisionMode::Half;
  if (name == "single" || name == "float32" || name == "fp32") return PrecisionMode::Single;
  if (name == "double" || name == "float64" || name == "fp64") return PrecisionMode::Double;
  throw ContractError("unknown precision mode '" + std::string(name) + "'");
}

}  // namespace shgcn::numkit
