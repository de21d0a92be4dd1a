#pragma once

#include "sniht/core.hpp"

#include <filesystem>
#include <string>

namespace sniht {

/// Complex matrix CSV: one row per matrix row, 2q columns alternating
/// re,im per entry, no header. Dimensions are inferred from the file.
ComplexMatrix read_complex_csv(const std::filesystem::path& path);
void write_complex_csv(const std::filesystem::path& path, const ComplexMatrix& a);

/// Support file: 1-based indices, ascending, space-separated, one line.
void write_support_line(const std::filesystem::path& path, const SupportSet& support);
SupportSet read_support_line(const std::filesystem::path& path);

}  // namespace sniht
