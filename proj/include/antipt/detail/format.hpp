// format.hpp — stable numeric formatting for CSV/JSON emission

#pragma once

#include <cstdio>
#include <string>

namespace antipt::detail {

// 17 significant digits: lossless double round-trip, stable golden files
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

} // namespace antipt::detail
