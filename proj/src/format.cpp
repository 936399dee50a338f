#include "hardylab/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace hardylab {

namespace {

std::string non_finite(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return non_finite(v);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_full(double v) {
    if (!std::isfinite(v)) return non_finite(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace hardylab
