#pragma once

namespace mosaic {

inline constexpr const char* kVersion = "0.1.0";

} // namespace mosaic
