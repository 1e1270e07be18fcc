#pragma once

namespace shrinklab {

inline constexpr const char* kVersion = "1.0.0";

}
