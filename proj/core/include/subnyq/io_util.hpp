#pragma once

#include <cstdio>
#include <string>

namespace subnyq {

/// Fixed 12-significant-digit text form for every number we write, so repeated
/// runs produce byte-identical files and parsed values round-trip well below
/// 1e-9 relative error.
inline std::string fmt_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

}  // namespace subnyq
