#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wpd {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Fixed-point formatting with the given number of fractional digits.
std::string format_fixed(double v, int digits);

/// FNV-1a 64-bit digest of a byte string.
std::uint64_t fnv1a64(std::string_view data);

/// Digest rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view data);

/// English month name, month in 1..12.
std::string month_name(int month);

/// Strip leading and trailing ASCII whitespace.
std::string_view trim(std::string_view s);

/// Split on a delimiter; keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

/// Case-insensitive ASCII comparison.
bool iequals(std::string_view a, std::string_view b);

/// Lowercase copy (ASCII only).
std::string to_lower(std::string_view s);

/// Read a whole file; throws IoError on failure.
std::string read_file(const std::string& path);

/// Write a whole file; throws IoError on failure.
void write_file(const std::string& path, std::string_view content);

} // namespace wpd
