#pragma once

namespace wolffcap {

inline constexpr const char* kVersion = "0.1.0";

} // namespace wolffcap
