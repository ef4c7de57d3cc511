#pragma once

#include <charconv>
#include <string>

namespace xxz::detail {

// Shortest decimal form with the given number of significant digits,
// locale-independent and byte-stable across runs (printf "%g" style).
inline std::string format_double(double value, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value,
                             std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

} // namespace xxz::detail
