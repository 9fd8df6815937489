#pragma once

#include <string_view>

namespace shgcn::numkit {

// IEEE-754 binary16 / binary32 / binary64 rounding semantics.
enum class PrecisionMode { Half, Single, Double };

// Unit roundoff distance from 1 to the next representable value: 2^-10,
// 2^-23 and 2^-52 respectively.
double machine_epsilon(PrecisionMode mode) noexcept;

// Largest finite value of the format.
double max_finite(PrecisionMode mode) noexcept;

// Round-to-nearest-even onto the target format. Values past the format's
// range saturate to +-infinity and raise the thread-local overflow flag.
// NaN and infinities pass through unchanged.
double round_to_precision(double x, PrecisionMode mode) noexcept;

// Sticky per-thread overflow flag, set by round_to_precision.
bool overflow_flag() noexcept;
void clear_overflow_flag() noexcept;

std::string_view to_string(PrecisionMode mode) noexcept;

// Accepts "half"/"float16", "single"/"float32", "double"/"float64".
// Throws ContractError otherwise.
PrecisionMode parse_precision(std::string_view name);

}  // namespace shgcn::numkit
