#pragma once

#include <string>

namespace hardylab {

/// Shortest decimal form that reads back to the same double ("1", "0.25",
/// "1e-08"); "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// Fixed 17-significant-digit form used by the report writers.
std::string format_full(double v);

}  // namespace hardylab
