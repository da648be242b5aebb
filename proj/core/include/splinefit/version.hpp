#pragma once

namespace splinefit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace splinefit
