#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace momdec {

/// Fixed formatting with 12 significant digits, for byte-stable CSV output.
std::string format_real(double value);

/// FNV-1a 64-bit hash; used to stamp experiment CSVs with their config.
std::uint64_t fnv1a64(std::string_view text);

std::string hex64(std::uint64_t value);

}  // namespace momdec
