#pragma once

namespace adpqis {

inline constexpr const char* kVersion = "0.1.0";

} // namespace adpqis
