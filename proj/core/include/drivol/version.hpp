#pragma once

#include <string_view>

namespace drivol {

inline constexpr std::string_view kToolName = "drivol";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Version of the on-disk JSON/CSV document schemas.
inline constexpr int kSchemaVersion = 1;

}  // namespace drivol
