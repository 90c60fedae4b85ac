#pragma once

namespace framelab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace framelab
