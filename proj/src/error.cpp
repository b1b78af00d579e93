#include "qgms/error.hpp"

namespace qgms {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MALFORMED_ROW";
        case ErrorCode::InvariantViolation: return "INVARIANT_VIOLATION";
        case ErrorCode::NonMonotonicTime: return "NON_MONOTONIC_TIME";
        case ErrorCode::EmptySeries: return "EMPTY_SERIES";
        case ErrorCode::NonPositiveScale: return "NON_POSITIVE_SCALE";
        case ErrorCode::OffsetUnderflow: return "OFFSET_UNDERFLOW";
        case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
        case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
        case ErrorCode::DegenerateRegion: return "DEGENERATE_REGION";
        case ErrorCode::NonPositiveValue: return "NON_POSITIVE_VALUE";
        case ErrorCode::EmptySequence: return "EMPTY_SEQUENCE";
        case ErrorCode::SessionSealed: return "SESSION_SEALED";
        case ErrorCode::SessionRevealed: return "SESSION_REVEALED";
        case ErrorCode::AlreadyRevealed: return "ALREADY_REVEALED";
        case ErrorCode::InvalidState: return "INVALID_STATE";
        case ErrorCode::LookaheadRejected: return "LOOKAHEAD_REJECTED";
        case ErrorCode::MalformedLedger: return "MALFORMED_LEDGER";
        case ErrorCode::MalformedManifest: return "MALFORMED_MANIFEST";
        case ErrorCode::NotFound: return "NOT_FOUND";
        case ErrorCode::NotRevealed: return "NOT_REVEALED";
        case ErrorCode::Storage: return "STORAGE_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace qgms
