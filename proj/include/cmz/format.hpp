#pragma once

#include <array>
#include <charconv>
#include <string>

namespace cmz {

/// Locale-independent shortest-general formatting with `digits` significant digits.
inline std::string format_number(double value, int digits = 9) {
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                 std::chars_format::general, digits);
  if (ec != std::errc{}) return "nan";
  return {buffer.data(), ptr};
}

} // namespace cmz
