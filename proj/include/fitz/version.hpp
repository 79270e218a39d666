#pragma once

namespace fitz {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fitz
