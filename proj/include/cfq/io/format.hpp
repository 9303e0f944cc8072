#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace cfq::io {

inline constexpr int kMachineDigits = 12;
inline constexpr int kTableDigits = 4;

/// Values this close to zero are written as 0 so rounding noise never shows
/// up as "-0" or "1e-17".
inline constexpr double kZeroSnap = 1e-14;

/// Shortest %g rendering with `digits` significant digits.
inline std::string format_number(double x, int digits = kMachineDigits) {
    if (std::abs(x) < kZeroSnap) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

/// `x` rounded to `digits` significant digits.
inline double round_digits(double x, int digits = kMachineDigits) { return std::stod(format_number(x, digits)); }

}  // namespace cfq::io
