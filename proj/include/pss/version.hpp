#pragma once

namespace pss {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pss
