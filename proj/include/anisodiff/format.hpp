#pragma once

#include <cstdio>
#include <string>

namespace anisodiff {

// shortest round-trippable decimal form shared by every text output
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace anisodiff
