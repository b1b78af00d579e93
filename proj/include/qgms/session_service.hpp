#pragma once

#include "qgms/blind_harness.hpp"
#include "qgms/error.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace qgms {

/// Append-only on-disk state for blind sessions, one directory per session:
///
///   sessions/<id>/series.csv     original series (canonical CSV)
///   sessions/<id>/session.json   id, seed, symbol, timeframe, commitment, state, cursor
///   sessions/<id>/ledger.jsonl   commitment ledger, one entry per line
///   sessions/<id>/manifest.json  canonical manifest, written at reveal
///   sessions/<id>/reveal.json    reveal response, written at reveal
///
/// Every mutation is flushed to disk (fsync) before it is acknowledged.
class SessionRecordStore {
public:
    struct Record {
        std::mutex mutex;  // serializes mutations of this session
        BlindSession session;
        std::optional<nlohmann::json> reveal;
        std::filesystem::path dir;

        explicit Record(BlindSession s) : session(std::move(s)) {}
    };

    /// Loads every session found under data_dir. Sessions whose files do not
    /// load are skipped with a message on stderr.
    explicit SessionRecordStore(std::filesystem::path data_dir, HarnessClock clock = system_now);

    std::shared_ptr<Record> create(const PriceSeries& series, std::uint64_t seed);
    std::shared_ptr<Record> find(const std::string& session_id) const;
    std::size_t size() const;

    // Callers hold record.mutex.
    void persist_state(const Record& record) const;
    void persist_ledger_entry(const Record& record, const LedgerEntry& entry) const;
    void persist_reveal(Record& record, const RevealResult& result) const;

    const std::filesystem::path& data_dir() const { return data_dir_; }

private:
    void load_existing();

    std::filesystem::path data_dir_;
    HarnessClock clock_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Record>> records_;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;  // null for bodiless responses (204)
};

/// HTTP/JSON front end over the blind harness.
///
///   POST /sessions {csv_path | inline_bars, seed[, symbol, timeframe]} -> 201 {session_id, commitment}
///   GET  /sessions/{id}/bars/next                  -> 200 bar | 204 end of stream
///   POST /sessions/{id}/predictions {bar_index, expected_direction, note} -> 201 {entry_hash, chain_length}
///   POST /sessions/{id}/seal                       -> 200
///   POST /sessions/{id}/reveal                     -> 200 {manifest, verification} (idempotent)
///   GET  /sessions/{id}/report?horizon=&atr=&k=    -> 200 MetricsReport
///   GET  /health                                   -> 200
///
/// Errors carry {code, message}.
class SessionService {
public:
    explicit SessionService(std::filesystem::path data_dir, HarnessClock clock = system_now);
    ~SessionService();
    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    ApiResponse create_session(const nlohmann::json& body);
    ApiResponse next_bar(const std::string& session_id);
    ApiResponse submit_prediction(const std::string& session_id, const nlohmann::json& body);
    ApiResponse seal(const std::string& session_id);
    ApiResponse reveal(const std::string& session_id);
    ApiResponse report(const std::string& session_id, const std::map<std::string, std::string>& query);
    ApiResponse health() const;

    /// Binds and serves until stop(). Returns false if the port cannot be bound.
    bool listen(const std::string& host, int port);
    /// Binds an ephemeral port and returns it, or -1.
    int bind_any_port(const std::string& host);
    /// Serves on a port obtained from bind_any_port; blocks until stop().
    bool listen_after_bind();
    void stop();

    SessionRecordStore& store() { return store_; }

private:
    void install_routes();

    SessionRecordStore store_;
    std::unique_ptr<httplib::Server> server_;
};

/// HTTP status for a harness error code.
int http_status_for(ErrorCode code);

}  // namespace qgms
