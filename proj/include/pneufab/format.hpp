#pragma once

#include <string>

namespace pneufab {

/// Fixed-point with `decimals` digits; never prints "-0.000".
std::string fixed(double value, int decimals);

/// Shortest fixed-notation text that parses back to `value` (no exponent).
/// 125.0 -> "125", 12.5 -> "12.5".
std::string minimal_decimal(double value);

/// Like minimal_decimal but first rounded to `max_decimals` places.
std::string trimmed(double value, int max_decimals);

}  // namespace pneufab
