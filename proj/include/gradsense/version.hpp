#pragma once

namespace gradsense {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gradsense
