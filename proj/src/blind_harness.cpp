#include "qgms/blind_harness.hpp"

#include "qgms/canonical_json.hpp"
#include "qgms/error.hpp"
#include "qgms/sha256.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace qgms {

std::string_view to_string(SessionState s) {
    switch (s) {
        case SessionState::Created: return "created";
        case SessionState::Running: return "running";
        case SessionState::Sealed: return "sealed";
        case SessionState::Revealed: return "revealed";
    }
    return "?";
}

std::optional<SessionState> session_state_from_string(std::string_view s) {
    for (SessionState st : {SessionState::Created, SessionState::Running, SessionState::Sealed, SessionState::Revealed}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- manifest

nlohmann::json AnonymizationManifest::to_json() const {
    return {
        {"symbol", symbol},
        {"timeframe", timeframe},
        {"start_timestamp", format_rfc3339(start_timestamp)},
        {"end_timestamp", format_rfc3339(end_timestamp)},
        {"affine_a", affine_a},
        {"affine_b", affine_b},
        {"rng_seed", rng_seed},
        {"series_digest", series_digest},
    };
}

AnonymizationManifest AnonymizationManifest::from_json(const nlohmann::json& j) {
    const auto fail = [](const std::string& what) -> AnonymizationManifest {
        throw Error(ErrorCode::MalformedManifest, "manifest: " + what);
    };
    if (!j.is_object()) return fail("not a JSON object");
    for (const char* key : {"symbol", "timeframe", "start_timestamp", "end_timestamp", "series_digest"}) {
        if (!j.contains(key) || !j.at(key).is_string()) return fail(std::string("missing string field ") + key);
    }
    for (const char* key : {"affine_a", "affine_b"}) {
        if (!j.contains(key) || !j.at(key).is_number()) return fail(std::string("missing number field ") + key);
    }
    if (!j.contains("rng_seed") || !j.at("rng_seed").is_number_unsigned()) {
        // Small seeds parse as unsigned; negative ones are rejected.
        if (!(j.contains("rng_seed") && j.at("rng_seed").is_number_integer() && j.at("rng_seed").get<long long>() >= 0)) {
            return fail("missing unsigned field rng_seed");
        }
    }
    AnonymizationManifest m;
    m.symbol = j.at("symbol").get<std::string>();
    m.timeframe = j.at("timeframe").get<std::string>();
    const auto start = parse_rfc3339(j.at("start_timestamp").get<std::string>());
    const auto end = parse_rfc3339(j.at("end_timestamp").get<std::string>());
    if (!start || !end) return fail("bad timestamp");
    m.start_timestamp = *start;
    m.end_timestamp = *end;
    m.affine_a = j.at("affine_a").get<double>();
    m.affine_b = j.at("affine_b").get<double>();
    m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    m.series_digest = j.at("series_digest").get<std::string>();
    if (!(m.affine_a > 0.0)) return fail("affine_a must be positive");
    if (!digest_from_hex(m.series_digest)) return fail("series_digest is not a SHA-256 hex digest");
    return m;
}

std::string AnonymizationManifest::canonical_json() const { return canonical_dump(to_json()); }

std::string AnonymizationManifest::commitment() const { return sha256_hex(canonical_json()); }

std::string series_digest(const PriceSeries& series) { return sha256_hex(write_csv(series)); }

// ------------------------------------------------------------ anonymization

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on [0, 1) for draw number `counter`.
double unit_draw(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(splitmix64(seed ^ splitmix64(counter)) >> 11) * 0x1.0p-53;
}

Decimal six_significant(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return Decimal::parse(buf);
}

constexpr int kMaxAffineDraws = 256;

}  // namespace

AffineParameters derive_affine(const PriceSeries& series, std::uint64_t seed) {
    require_non_empty(series);
    Decimal min_low = series[0].low;
    Decimal max_high = series[0].high;
    for (const Bar& bar : series.bars()) {
        min_low = std::min(min_low, bar.low);
        max_high = std::max(max_high, bar.high);
    }
    const double spread = (Decimal(10) * (max_high - min_low)).to_double();

    std::uint64_t counter = 0;
    for (int attempt = 0; attempt < kMaxAffineDraws; ++attempt) {
        const double u_a = unit_draw(seed, counter++);
        const double u_b = unit_draw(seed, counter++);
        AffineParameters p{six_significant(0.25 * std::pow(16.0, u_a)), six_significant((2.0 * u_b - 1.0) * spread)};
        // min_low is the smallest price, and a > 0 keeps it the smallest.
        if ((p.a * min_low + p.b).sign() > 0) return p;
    }
    // Practically unreachable (each draw succeeds with probability >= ~1/2
    // for b in [-s, s]); keep the map total.
    return AffineParameters{six_significant(0.25 * std::pow(16.0, unit_draw(seed, 0))), Decimal(0)};
}

PriceSeries to_price_series(std::span<const AnonymizedBar> bars, std::string timeframe) {
    using namespace std::chrono;
    const Timestamp origin{sys_days{year{2000} / January / 1}};
    std::vector<Bar> out;
    out.reserve(bars.size());
    for (const AnonymizedBar& ab : bars) {
        Bar bar;
        bar.timestamp = origin + days{static_cast<long>(ab.index)};
        bar.open = ab.open;
        bar.high = ab.high;
        bar.low = ab.low;
        bar.close = ab.close;
        out.push_back(std::move(bar));
    }
    return PriceSeries("ANON", std::move(timeframe), std::move(out));
}

double deanonymize(const Decimal& price, const AnonymizationManifest& manifest) {
    return (price.to_double() - manifest.affine_b) / manifest.affine_a;
}

// ------------------------------------------------------------------- ledger

nlohmann::json LedgerEntry::to_json() const {
    return {
        {"index", index},
        {"cursor_index", cursor_index},
        {"payload", payload},
        {"timestamp_utc", timestamp_utc},
        {"prev_hash", prev_hash},
        {"hash", hash},
    };
}

std::string LedgerEntry::to_json_line() const { return canonical_dump(to_json()); }

std::optional<LedgerEntry> LedgerEntry::from_json(const nlohmann::json& j) {
    if (!j.is_object()) return std::nullopt;
    const auto is_u64 = [&](const char* k) { return j.contains(k) && j.at(k).is_number_unsigned(); };
    const auto is_str = [&](const char* k) { return j.contains(k) && j.at(k).is_string(); };
    if (!is_u64("index") || !is_u64("cursor_index") || !is_str("payload") || !is_str("timestamp_utc") ||
        !is_str("prev_hash") || !is_str("hash")) {
        return std::nullopt;
    }
    LedgerEntry e;
    e.index = j.at("index").get<std::uint64_t>();
    e.cursor_index = j.at("cursor_index").get<std::uint64_t>();
    e.payload = j.at("payload").get<std::string>();
    e.timestamp_utc = j.at("timestamp_utc").get<std::string>();
    e.prev_hash = j.at("prev_hash").get<std::string>();
    e.hash = j.at("hash").get<std::string>();
    return e;
}

std::string ledger_hash(std::string_view prev_hash_hex, std::string_view payload, std::uint64_t index) {
    const auto prev = digest_from_hex(prev_hash_hex);
    if (!prev) return {};
    std::array<std::uint8_t, 8> index_be{};
    for (int i = 0; i < 8; ++i) index_be[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
    Sha256 h;
    h.update(*prev).update(payload).update(index_be);
    return to_hex(h.finish());
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j = {
        {"chain_ok", chain_ok},
        {"commitment_ok", commitment_ok},
        {"predictions", predictions},
    };
    j["first_broken_link"] = first_broken_link ? nlohmann::json(*first_broken_link) : nlohmann::json(nullptr);
    if (digest_ok) j["digest_ok"] = *digest_ok;
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

namespace {

// Empty string when the entry is sound; otherwise why it is not.
std::string check_entry(const LedgerEntry& e, std::uint64_t position, const std::string& expected_prev,
                        std::uint64_t min_cursor, bool is_last, std::size_t predictions_before, bool& is_seal) {
    is_seal = false;
    if (e.index != position) return "index " + std::to_string(e.index) + " at position " + std::to_string(position);
    if (e.prev_hash != expected_prev) return "prev_hash does not match the preceding entry";
    if (ledger_hash(e.prev_hash, e.payload, e.index) != e.hash) return "hash mismatch";

    const auto payload = nlohmann::json::parse(e.payload, nullptr, false);
    if (payload.is_discarded() || !payload.is_object()) return "payload is not a JSON object";
    if (canonical_dump(payload) != e.payload) return "payload is not canonical";
    if (!payload.contains("kind") || !payload["kind"].is_string()) return "payload without kind";
    if (!payload.contains("cursor_index") || payload["cursor_index"] != e.cursor_index) {
        return "payload cursor_index disagrees with entry";
    }
    if (!payload.contains("timestamp_utc") || payload["timestamp_utc"] != e.timestamp_utc) {
        return "payload timestamp disagrees with entry";
    }
    if (e.cursor_index < min_cursor) return "cursor moved backwards";

    const std::string kind = payload["kind"].get<std::string>();
    if (kind == "prediction") {
        if (!payload.contains("bar_index") || !payload["bar_index"].is_number_unsigned()) return "missing bar_index";
        if (payload["bar_index"].get<std::uint64_t>() > e.cursor_index) return "prediction looks ahead of cursor";
        const auto dir = payload.value("expected_direction", nlohmann::json());
        if (!dir.is_string() || (dir != "up" && dir != "down")) return "bad expected_direction";
        return {};
    }
    if (kind == "seal") {
        is_seal = true;
        if (!is_last) return "entry after seal";
        if (!payload.contains("predictions") || payload["predictions"] != predictions_before) {
            return "seal prediction count mismatch";
        }
        return {};
    }
    return "unknown payload kind '" + kind + "'";
}

}  // namespace

VerificationReport verify_chain(std::span<const LedgerEntry> entries, bool require_seal) {
    VerificationReport report;
    std::string expected_prev(kGenesisHash);
    std::uint64_t min_cursor = 0;
    bool sealed = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        bool is_seal = false;
        const std::string problem = check_entry(entries[i], i, expected_prev, min_cursor, i + 1 == entries.size(),
                                                report.predictions, is_seal);
        if (!problem.empty()) {
            report.chain_ok = false;
            report.first_broken_link = i;
            report.detail = "entry " + std::to_string(i) + ": " + problem;
            return report;
        }
        if (is_seal) {
            sealed = true;
        } else {
            ++report.predictions;
        }
        expected_prev = entries[i].hash;
        min_cursor = entries[i].cursor_index;
    }
    if (require_seal && !sealed) {
        report.chain_ok = false;
        report.first_broken_link = entries.size();
        report.detail = "ledger does not end with a seal entry";
    }
    return report;
}

std::vector<LedgerEntry> read_ledger_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedLedger, "cannot read ledger " + path.string());
    std::vector<LedgerEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto e = LedgerEntry::from_json(nlohmann::json::parse(line, nullptr, false));
        if (!e) throw Error(ErrorCode::MalformedLedger, "ledger line " + std::to_string(out.size() + 1) + " is malformed");
        out.push_back(std::move(*e));
    }
    return out;
}

VerificationReport verify_ledger(const std::filesystem::path& ledger_path, const std::filesystem::path& manifest_path,
                                 std::string_view commitment, const PriceSeries* original) {
    std::ifstream ledger_in(ledger_path);
    if (!ledger_in) throw Error(ErrorCode::MalformedLedger, "cannot read ledger " + ledger_path.string());
    std::ifstream manifest_in(manifest_path);
    if (!manifest_in) throw Error(ErrorCode::MalformedManifest, "cannot read manifest " + manifest_path.string());

    const auto manifest_json = nlohmann::json::parse(manifest_in, nullptr, false);
    if (manifest_json.is_discarded()) throw Error(ErrorCode::MalformedManifest, "manifest is not valid JSON");
    const AnonymizationManifest manifest = AnonymizationManifest::from_json(manifest_json);

    std::vector<LedgerEntry> entries;
    std::optional<std::size_t> unparseable;
    std::string line;
    while (std::getline(ledger_in, line)) {
        auto e = LedgerEntry::from_json(nlohmann::json::parse(line, nullptr, false));
        if (!e) {
            unparseable = entries.size();
            break;
        }
        entries.push_back(std::move(*e));
    }

    VerificationReport report = verify_chain(entries, !unparseable.has_value());
    if (unparseable && report.chain_ok) {
        report.chain_ok = false;
        report.first_broken_link = *unparseable;
        report.detail = "entry " + std::to_string(*unparseable) + ": line does not parse as a ledger entry";
    }

    std::string published(commitment);
    std::transform(published.begin(), published.end(), published.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    report.commitment_ok = sha256_hex(canonical_dump(manifest_json)) == published;
    if (original) report.digest_ok = series_digest(*original) == manifest.series_digest;
    return report;
}

std::vector<Prediction> ledger_predictions(std::span<const LedgerEntry> entries) {
    std::vector<Prediction> out;
    for (const LedgerEntry& e : entries) {
        const auto payload = nlohmann::json::parse(e.payload, nullptr, false);
        if (payload.is_discarded() || payload.value("kind", "") != "prediction") continue;
        Prediction p;
        p.bar_index = payload.at("bar_index").get<std::size_t>();
        p.expected_direction = payload.at("expected_direction") == "up" ? Direction::Up : Direction::Down;
        p.note = payload.value("note", "");
        out.push_back(std::move(p));
    }
    return out;
}

Timestamp system_now() {
    return std::chrono::floor<std::chrono::microseconds>(std::chrono::system_clock::now());
}

// ------------------------------------------------------------------ session

namespace {

std::string random_session_id() {
    std::random_device rd;
    std::array<std::uint8_t, 16> bytes{};
    for (std::size_t i = 0; i < bytes.size(); i += 4) {
        const std::uint32_t v = rd();
        for (std::size_t k = 0; k < 4; ++k) bytes[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    return to_hex(bytes);
}

}  // namespace

BlindSession BlindSession::create(const PriceSeries& series, std::uint64_t seed, HarnessClock clock,
                                  std::string session_id) {
    require_non_empty(series);
    const AffineParameters affine = derive_affine(series, seed);

    BlindSession s;
    s.id_ = session_id.empty() ? random_session_id() : std::move(session_id);
    s.original_ = series;
    s.clock_ = clock ? std::move(clock) : HarnessClock(system_now);
    s.manifest_ = AnonymizationManifest{series.symbol(),      series.timeframe(),  series[0].timestamp,
                                        series.bars().back().timestamp, affine.a.to_double(), affine.b.to_double(),
                                        seed,                  series_digest(series)};
    s.commitment_ = s.manifest_.commitment();
    s.bars_.reserve(series.size());
    const PriceSeries transformed = affine_transform(series, affine.a, affine.b);
    for (std::size_t i = 0; i < transformed.size(); ++i) {
        const Bar& b = transformed[i];
        s.bars_.push_back(AnonymizedBar{i, b.open, b.high, b.low, b.close});
    }
    return s;
}

BlindSession BlindSession::restore(const PriceSeries& series, std::uint64_t seed, std::string session_id,
                                   SessionState state, std::size_t cursor, std::vector<LedgerEntry> ledger,
                                   std::string published_commitment, HarnessClock clock) {
    BlindSession s = create(series, seed, std::move(clock), std::move(session_id));
    if (!published_commitment.empty()) s.commitment_ = std::move(published_commitment);
    if (cursor > s.bars_.size() || (state == SessionState::Created && cursor != 0)) {
        throw Error(ErrorCode::InvalidState, "persisted cursor inconsistent with session state");
    }
    s.state_ = state;
    s.cursor_ = cursor;
    s.ledger_ = std::move(ledger);
    return s;
}

void BlindSession::require_open(std::string_view action) const {
    if (state_ == SessionState::Sealed) {
        throw Error(ErrorCode::SessionSealed, std::string(action) + ": session is sealed");
    }
    if (state_ == SessionState::Revealed) {
        throw Error(ErrorCode::SessionRevealed, std::string(action) + ": session is revealed");
    }
}

std::optional<AnonymizedBar> BlindSession::next_bar() {
    require_open("next_bar");
    state_ = SessionState::Running;
    if (cursor_ >= bars_.size()) return std::nullopt;
    return bars_[cursor_++];
}

const LedgerEntry& BlindSession::append(nlohmann::json payload) {
    LedgerEntry e;
    e.index = ledger_.size();
    e.cursor_index = cursor_ - 1;
    e.timestamp_utc = format_rfc3339(clock_());
    payload["cursor_index"] = e.cursor_index;
    payload["timestamp_utc"] = e.timestamp_utc;
    e.payload = canonical_dump(payload);
    e.prev_hash = ledger_.empty() ? std::string(kGenesisHash) : ledger_.back().hash;
    e.hash = ledger_hash(e.prev_hash, e.payload, e.index);
    ledger_.push_back(std::move(e));
    return ledger_.back();
}

const LedgerEntry& BlindSession::submit_prediction(const Prediction& prediction) {
    require_open("submit_prediction");
    if (prediction.expected_direction == Direction::Flat) {
        throw Error(ErrorCode::InvalidConfig, "expected_direction must be up or down");
    }
    if (prediction.bar_index >= cursor_) {
        throw Error(ErrorCode::LookaheadRejected, "bar " + std::to_string(prediction.bar_index) +
                                                      " has not been served (cursor " + std::to_string(cursor_) + ")");
    }
    return append({
        {"kind", "prediction"},
        {"bar_index", prediction.bar_index},
        {"expected_direction", to_string(prediction.expected_direction)},
        {"note", prediction.note},
    });
}

void BlindSession::seal() {
    require_open("seal");
    if (state_ != SessionState::Running) throw Error(ErrorCode::InvalidState, "seal: no bar has been served yet");
    // Only predictions precede the seal entry.
    append({{"kind", "seal"}, {"predictions", ledger_.size()}});
    state_ = SessionState::Sealed;
}

RevealResult BlindSession::seal_and_reveal() {
    if (state_ == SessionState::Revealed) throw Error(ErrorCode::AlreadyRevealed, "session already revealed");
    if (state_ == SessionState::Created) throw Error(ErrorCode::InvalidState, "reveal: session never started");
    if (state_ == SessionState::Running) seal();
    RevealResult result;
    result.manifest = manifest_;
    result.verification = verify_chain(ledger_);
    result.verification.commitment_ok = manifest_.commitment() == commitment_;
    state_ = SessionState::Revealed;
    return result;
}

}  // namespace qgms
