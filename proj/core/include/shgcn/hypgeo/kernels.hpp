#pragma once

#include <span>

#include "shgcn/numkit/precision.hpp"

// Row kernels shared by the vector API and the tape ops. Each kernel computes
// in double and rounds intermediate norms and its output to `mode`, so the
// same emulated arithmetic drives geometry probes and layer forwards.
namespace shgcn::hypgeo::kernels {

using numkit::PrecisionMode;

double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm(std::span<const double> x) noexcept;

// round(sqrt(c) * ||x||)
double scaled_norm(std::span<const double> x, double c, PrecisionMode mode) noexcept;

// tanh(sqrt(c)|v|) v / (sqrt(c)|v|); zero maps to zero.
void exp0(std::span<const double> v, double c, PrecisionMode mode, std::span<double> out) noexcept;

// artanh(sqrt(c)|y|) y / (sqrt(c)|y|). Returns false, leaving out untouched,
// when the rounded sqrt(c)|y| reaches 1 (point on or past the boundary).
bool log0(std::span<const double> y, double c, PrecisionMode mode, std::span<double> out) noexcept;

// Moebius addition exactly as the closed form, no boundary handling.
void mobius_add_raw(std::span<const double> x, std::span<const double> y, double c, PrecisionMode mode,
                    std::span<double> out) noexcept;

// Rescale onto radius (1 - eps)/sqrt(c) when sqrt(c)|x| exceeds 1 - eps.
// Returns true when the row was clipped.
bool project(std::span<const double> x, double c, double eps, PrecisionMode mode,
             std::span<double> out) noexcept;

}  // namespace shgcn::hypgeo::kernels
