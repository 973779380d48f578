#pragma once

namespace ar1bayes {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ar1bayes
