#pragma once

#include <string_view>

namespace skitrain {

inline constexpr std::string_view kVersion = "1.0.0";
/// Written into output files whose format has room for a generator tag.
inline constexpr std::string_view kVersionTag = "skitrain 1.0.0";

}  // namespace skitrain
