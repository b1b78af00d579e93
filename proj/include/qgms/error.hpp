#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgms {

enum class ErrorCode {
    MalformedRow,
    InvariantViolation,
    NonMonotonicTime,
    EmptySeries,
    NonPositiveScale,
    OffsetUnderflow,
    IndexOutOfRange,
    InvalidConfig,
    DegenerateRegion,
    NonPositiveValue,
    EmptySequence,
    SessionSealed,
    SessionRevealed,
    AlreadyRevealed,
    InvalidState,
    LookaheadRejected,
    MalformedLedger,
    MalformedManifest,
    NotFound,
    NotRevealed,
    Storage,
};

/// Stable SCREAMING_SNAKE name used in service error bodies and CLI output.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qgms
