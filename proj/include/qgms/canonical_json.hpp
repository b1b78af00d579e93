#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace qgms {

/// Hash-preimage serialization: object keys sorted, no whitespace, integers
/// verbatim, floating-point numbers printed with 12 significant digits
/// (`%.12g`). Throws std::invalid_argument on NaN or infinity.
std::string canonical_dump(const nlohmann::json& value);

/// Formats a double the way canonical_dump does.
std::string canonical_number(double value);

}  // namespace qgms
