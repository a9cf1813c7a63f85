#pragma once

#include <cstdlib>
#include <string>

#include <fmt/format.h>

namespace wgvqe {

/// Every floating-point value written to CSV uses 9 significant digits.
inline std::string fmt9(double v) { return fmt::format("{:.9g}", v); }

/// v rounded to 9 significant digits, for JSON fields that must diff stably.
inline double round9(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

}  // namespace wgvqe
