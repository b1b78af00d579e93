#pragma once

#include "qgms/decimal.hpp"
#include "qgms/market_data.hpp"
#include "qgms/metrics.hpp"
#include "qgms/time.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgms {

enum class SessionState { Created, Running, Sealed, Revealed };
std::string_view to_string(SessionState s);
std::optional<SessionState> session_state_from_string(std::string_view s);

/// Everything removed from the analyst's view. Stays sealed until reveal;
/// only the SHA-256 of its canonical JSON (the commitment) is published.
struct AnonymizationManifest {
    std::string symbol;
    std::string timeframe;
    Timestamp start_timestamp{};
    Timestamp end_timestamp{};
    double affine_a = 1.0;
    double affine_b = 0.0;
    std::uint64_t rng_seed = 0;
    std::string series_digest;

    nlohmann::json to_json() const;
    /// Throws Error(MalformedManifest) on missing or mistyped fields.
    static AnonymizationManifest from_json(const nlohmann::json& j);
    std::string canonical_json() const;
    std::string commitment() const;

    friend bool operator==(const AnonymizationManifest&, const AnonymizationManifest&) = default;
};

/// SHA-256 of write_csv(series).
std::string series_digest(const PriceSeries& series);

/// The seed-derived positive affine map. Both values carry 6 significant
/// digits so they are exact in decimal and in 12-digit canonical JSON.
struct AffineParameters {
    Decimal a;
    Decimal b;
};

/// a = 0.25 * 16^u (log-uniform on [0.25, 4]); b uniform on [-s, s] with
/// s = 10 * (max high - min low). Redraws both while any transformed price
/// would be <= 0. Draws come from SplitMix64 over (seed, draw counter).
AffineParameters derive_affine(const PriceSeries& series, std::uint64_t seed);

/// A bar as the analyst sees it: ordinal index, transformed prices, no time,
/// no volume.
struct AnonymizedBar {
    std::size_t index = 0;
    Decimal open;
    Decimal high;
    Decimal low;
    Decimal close;

    friend bool operator==(const AnonymizedBar&, const AnonymizedBar&) = default;
};

/// Wraps served bars in a PriceSeries (one synthetic day per ordinal) so the
/// analysis pipeline can run on exactly what the analyst has seen.
PriceSeries to_price_series(std::span<const AnonymizedBar> bars, std::string timeframe = {});

/// One line of the commitment ledger (JSON Lines on disk).
///
/// hash = SHA-256(prev_hash bytes || payload bytes || u64 big-endian index).
/// The payload is canonical JSON and repeats cursor_index and timestamp_utc,
/// so those fields are covered by the hash as well.
struct LedgerEntry {
    std::uint64_t index = 0;
    std::uint64_t cursor_index = 0;
    std::string payload;
    std::string timestamp_utc;
    std::string prev_hash;
    std::string hash;

    nlohmann::json to_json() const;
    std::string to_json_line() const;
    static std::optional<LedgerEntry> from_json(const nlohmann::json& j);

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

inline constexpr std::string_view kGenesisHash = "0000000000000000000000000000000000000000000000000000000000000000";

std::string ledger_hash(std::string_view prev_hash_hex, std::string_view payload, std::uint64_t index);

struct VerificationReport {
    bool chain_ok = true;
    bool commitment_ok = true;
    std::optional<std::uint64_t> first_broken_link;
    std::optional<bool> digest_ok;  // only when the original series is supplied
    std::string detail;
    std::size_t predictions = 0;

    bool ok() const { return chain_ok && commitment_ok && digest_ok.value_or(true); }
    nlohmann::json to_json() const;
};

/// Walks the chain from the genesis hash. Each entry must carry its position
/// as index, link to its predecessor, hash correctly, hold a canonical
/// payload that agrees with its cursor_index / timestamp_utc, and never
/// predict past its cursor. With `require_seal`, the chain must end in
/// exactly one seal entry; a missing seal is reported at index size().
/// Only chain_ok / first_broken_link / detail / predictions are filled.
VerificationReport verify_chain(std::span<const LedgerEntry> entries, bool require_seal = true);

/// Offline re-verification from files, for a third-party evaluator.
/// Lines that fail to parse count as broken links. Throws
/// Error(MalformedLedger) when the ledger cannot be read and
/// Error(MalformedManifest) when the manifest is not a valid manifest.
VerificationReport verify_ledger(const std::filesystem::path& ledger_path, const std::filesystem::path& manifest_path,
                                 std::string_view commitment, const PriceSeries* original = nullptr);

/// Predictions recorded in a ledger, in chain order.
std::vector<Prediction> ledger_predictions(std::span<const LedgerEntry> entries);
std::vector<LedgerEntry> read_ledger_file(const std::filesystem::path& path);

using HarnessClock = std::function<Timestamp()>;
Timestamp system_now();

struct RevealResult {
    AnonymizationManifest manifest;
    VerificationReport verification;
};

/// Forward replay of an anonymized series with a hash-chained prediction
/// ledger. State only moves Created -> Running -> Sealed -> Revealed.
/// Not internally synchronized; callers serialize mutations per session.
class BlindSession {
public:
    /// Throws Error(EmptySeries).
    static BlindSession create(const PriceSeries& series, std::uint64_t seed, HarnessClock clock = system_now,
                               std::string session_id = {});

    /// Rebuilds a persisted session. The ledger is taken as-is (it is checked
    /// at reveal) and the cursor must fit the state. A non-empty
    /// `published_commitment` replaces the recomputed one, so a series that
    /// changed on disk shows up as commitment_ok = false at reveal.
    static BlindSession restore(const PriceSeries& series, std::uint64_t seed, std::string session_id,
                                SessionState state, std::size_t cursor, std::vector<LedgerEntry> ledger,
                                std::string published_commitment = {}, HarnessClock clock = system_now);

    const std::string& id() const { return id_; }
    SessionState state() const { return state_; }
    std::size_t cursor() const { return cursor_; }
    std::size_t bar_count() const { return bars_.size(); }
    const std::string& commitment() const { return commitment_; }
    std::span<const LedgerEntry> ledger() const { return ledger_; }
    std::uint64_t seed() const { return manifest_.rng_seed; }
    /// Bars served so far.
    std::span<const AnonymizedBar> served_bars() const { return std::span(bars_).first(cursor_); }

    /// Server-side material. Never hand these to the analyst before reveal.
    const PriceSeries& original_series() const { return original_; }
    const AnonymizationManifest& sealed_manifest() const { return manifest_; }

    /// Bar at the cursor, or nullopt at end of stream.
    /// Throws Error(SessionSealed / SessionRevealed).
    std::optional<AnonymizedBar> next_bar();

    /// Appends a prediction about an already-served bar.
    /// Throws Error(LookaheadRejected / SessionSealed / SessionRevealed /
    /// InvalidConfig for a flat direction).
    const LedgerEntry& submit_prediction(const Prediction& prediction);

    /// Running -> Sealed; appends the closing seal entry.
    void seal();

    /// Seals if still running, then verifies the chain and the commitment and
    /// moves to Revealed. Throws Error(AlreadyRevealed / InvalidState).
    RevealResult seal_and_reveal();

private:
    BlindSession() = default;
    const LedgerEntry& append(nlohmann::json payload);
    void require_open(std::string_view action) const;

    std::string id_;
    SessionState state_ = SessionState::Created;
    std::size_t cursor_ = 0;
    std::vector<AnonymizedBar> bars_;
    std::string commitment_;
    AnonymizationManifest manifest_;
    PriceSeries original_;
    std::vector<LedgerEntry> ledger_;
    HarnessClock clock_;
};

/// Maps anonymized prices back with the revealed manifest: (p - b) / a.
double deanonymize(const Decimal& price, const AnonymizationManifest& manifest);

}  // namespace qgms
