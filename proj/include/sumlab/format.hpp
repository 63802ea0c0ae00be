#pragma once

#include <charconv>
#include <string>

namespace sumlab {

/// 17 significant digits, '.' separator, independent of the global locale.
inline std::string fmt17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace sumlab
