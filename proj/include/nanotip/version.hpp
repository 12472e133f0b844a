#pragma once

namespace nanotip {

inline constexpr const char* version = "0.1.0";

} // namespace nanotip
