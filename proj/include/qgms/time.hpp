#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace qgms {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)`; 't'/'z' and a space
/// separator are tolerated as RFC 3339 allows. Fractions beyond microseconds
/// are truncated. Returns nullopt on any syntax or range error.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

/// UTC, `Z` suffix, fractional part only when non-zero (trailing zeros trimmed).
std::string format_rfc3339(Timestamp ts);

}  // namespace qgms
