#pragma once

#include <string>

namespace fiber {

/// Shortest decimal text that round-trips to the same double. Locale independent.
/// Non-finite values print as "nan", "inf" and "-inf".
std::string format_double(double value);

/// Parse a double in the C locale; throws InvalidArgument on trailing junk.
double parse_double(const std::string& text);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fiber
