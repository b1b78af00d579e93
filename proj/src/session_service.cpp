#include "qgms/session_service.hpp"

#include "qgms/canonical_json.hpp"
#include "qgms/error.hpp"
#include "qgms/json_io.hpp"

#include <httplib.h>

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace qgms {

namespace fs = std::filesystem;

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::SessionSealed:
        case ErrorCode::SessionRevealed:
        case ErrorCode::AlreadyRevealed:
        case ErrorCode::InvalidState:
        case ErrorCode::NotRevealed: return 409;
        case ErrorCode::LookaheadRejected: return 422;
        case ErrorCode::Storage: return 500;
        default: return 400;
    }
}

namespace {

// ---------------------------------------------------------------- storage

void sync_fd(int fd, const fs::path& path) {
    if (::fsync(fd) != 0) {
        ::close(fd);
        throw Error(ErrorCode::Storage, "fsync failed for " + path.string());
    }
}

void write_all(int fd, std::string_view data, const fs::path& path) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            ::close(fd);
            throw Error(ErrorCode::Storage, "write failed for " + path.string());
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

void write_file_durable(const fs::path& path, std::string_view content) {
    const fs::path tmp = path.string() + ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::Storage, "cannot write " + tmp.string());
    write_all(fd, content, tmp);
    sync_fd(fd, tmp);
    ::close(fd);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Storage, "cannot rename " + tmp.string() + ": " + ec.message());
}

void append_line_durable(const fs::path& path, std::string_view line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::Storage, "cannot append to " + path.string());
    std::string buf(line);
    buf += '\n';
    write_all(fd, buf, path);
    sync_fd(fd, path);
    ::close(fd);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Storage, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ------------------------------------------------------------ api helpers

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
    return {status, {{"code", code}, {"message", message}}};
}

ApiResponse error_response(const Error& e) {
    return error_response(http_status_for(e.code()), error_code_name(e.code()), e.what());
}

template <typename F>
ApiResponse guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return error_response(e);
    } catch (const nlohmann::json::exception& e) {
        return error_response(400, "BAD_REQUEST", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "INTERNAL", e.what());
    }
}

// Literal ints arrive as number_integer, parsed ones as number_unsigned.
bool non_negative_integer(const nlohmann::json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

Decimal json_price(const nlohmann::json& v, const char* name) {
    if (v.is_string()) return Decimal::parse(v.get<std::string>());
    if (v.is_number()) return Decimal::from_double(v.get<double>());
    throw Error(ErrorCode::MalformedRow, std::string("inline bar field ") + name + " must be a number or string");
}

PriceSeries series_from_body(const nlohmann::json& body) {
    const std::string symbol = body.value("symbol", "");
    const std::string timeframe = body.value("timeframe", "");
    if (body.contains("csv_path")) {
        const fs::path path = body.at("csv_path").get<std::string>();
        if (!fs::exists(path)) throw Error(ErrorCode::MalformedRow, "csv_path not found: " + path.string());
        return load_csv(path, symbol.empty() ? std::nullopt : std::optional(symbol),
                        timeframe.empty() ? std::nullopt : std::optional(timeframe));
    }
    if (!body.contains("inline_bars") || !body.at("inline_bars").is_array()) {
        throw Error(ErrorCode::MalformedRow, "request needs csv_path or inline_bars");
    }
    std::vector<Bar> bars;
    for (const auto& row : body.at("inline_bars")) {
        if (!row.is_object() || !row.contains("timestamp") || !row.at("timestamp").is_string()) {
            throw Error(ErrorCode::MalformedRow, "inline bar without timestamp");
        }
        const auto ts = parse_rfc3339(row.at("timestamp").get<std::string>());
        if (!ts) throw Error(ErrorCode::MalformedRow, "inline bar with bad RFC 3339 timestamp");
        Bar bar;
        bar.timestamp = *ts;
        try {
            bar.open = json_price(row.at("open"), "open");
            bar.high = json_price(row.at("high"), "high");
            bar.low = json_price(row.at("low"), "low");
            bar.close = json_price(row.at("close"), "close");
            if (row.contains("volume") && !row.at("volume").is_null()) bar.volume = json_price(row.at("volume"), "volume");
        } catch (const std::invalid_argument& e) {
            throw Error(ErrorCode::MalformedRow, e.what());
        }
        bars.push_back(std::move(bar));
    }
    return PriceSeries(symbol, timeframe, std::move(bars));
}

nlohmann::json session_snapshot(const BlindSession& s) {
    return {{"session_id", s.id()},
            {"seed", s.seed()},
            {"symbol", s.original_series().symbol()},
            {"timeframe", s.original_series().timeframe()},
            {"commitment", s.commitment()},
            {"state", to_string(s.state())},
            {"cursor", s.cursor()}};
}

}  // namespace

// ------------------------------------------------------------ record store

SessionRecordStore::SessionRecordStore(fs::path data_dir, HarnessClock clock)
    : data_dir_(std::move(data_dir)), clock_(std::move(clock)) {
    std::error_code ec;
    fs::create_directories(data_dir_ / "sessions", ec);
    if (ec) throw Error(ErrorCode::Storage, "cannot create " + (data_dir_ / "sessions").string() + ": " + ec.message());
    load_existing();
}

void SessionRecordStore::load_existing() {
    for (const auto& entry : fs::directory_iterator(data_dir_ / "sessions")) {
        if (!entry.is_directory()) continue;
        const fs::path dir = entry.path();
        try {
            const auto snap = nlohmann::json::parse(read_file(dir / "session.json"));
            const PriceSeries series = parse_csv(read_file(dir / "series.csv"), snap.at("symbol").get<std::string>(),
                                                 snap.at("timeframe").get<std::string>());
            const auto state = session_state_from_string(snap.at("state").get<std::string>());
            if (!state) throw Error(ErrorCode::Storage, "unknown state");
            std::vector<LedgerEntry> ledger =
                fs::exists(dir / "ledger.jsonl") ? read_ledger_file(dir / "ledger.jsonl") : std::vector<LedgerEntry>{};
            auto record = std::make_shared<Record>(BlindSession::restore(
                series, snap.at("seed").get<std::uint64_t>(), snap.at("session_id").get<std::string>(), *state,
                snap.at("cursor").get<std::size_t>(), std::move(ledger), snap.at("commitment").get<std::string>(),
                clock_));
            record->dir = dir;
            if (*state == SessionState::Revealed && fs::exists(dir / "reveal.json")) {
                record->reveal = nlohmann::json::parse(read_file(dir / "reveal.json"));
            }
            records_.emplace(record->session.id(), std::move(record));
        } catch (const std::exception& e) {
            std::cerr << "qgms: skipping session in " << dir << ": " << e.what() << '\n';
        }
    }
}

std::shared_ptr<SessionRecordStore::Record> SessionRecordStore::create(const PriceSeries& series, std::uint64_t seed) {
    auto record = std::make_shared<Record>(BlindSession::create(series, seed, clock_));
    record->dir = data_dir_ / "sessions" / record->session.id();
    std::error_code ec;
    fs::create_directories(record->dir, ec);
    if (ec) throw Error(ErrorCode::Storage, "cannot create " + record->dir.string());
    write_file_durable(record->dir / "series.csv", write_csv(series));
    write_file_durable(record->dir / "ledger.jsonl", "");
    persist_state(*record);

    std::unique_lock lock(map_mutex_);
    records_.emplace(record->session.id(), record);
    return record;
}

std::shared_ptr<SessionRecordStore::Record> SessionRecordStore::find(const std::string& session_id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = records_.find(session_id);
    return it == records_.end() ? nullptr : it->second;
}

std::size_t SessionRecordStore::size() const {
    std::shared_lock lock(map_mutex_);
    return records_.size();
}

void SessionRecordStore::persist_state(const Record& record) const {
    write_file_durable(record.dir / "session.json", canonical_dump(session_snapshot(record.session)) + "\n");
}

void SessionRecordStore::persist_ledger_entry(const Record& record, const LedgerEntry& entry) const {
    append_line_durable(record.dir / "ledger.jsonl", entry.to_json_line());
}

void SessionRecordStore::persist_reveal(Record& record, const RevealResult& result) const {
    nlohmann::json body = {{"manifest", result.manifest.to_json()}, {"verification", result.verification.to_json()}};
    write_file_durable(record.dir / "manifest.json", result.manifest.canonical_json() + "\n");
    write_file_durable(record.dir / "reveal.json", body.dump() + "\n");
    record.reveal = std::move(body);
}

// ----------------------------------------------------------------- service

SessionService::SessionService(fs::path data_dir, HarnessClock clock)
    : store_(std::move(data_dir), std::move(clock)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

SessionService::~SessionService() = default;

ApiResponse SessionService::health() const { return {200, {{"status", "ok"}, {"sessions", store_.size()}}}; }

ApiResponse SessionService::create_session(const nlohmann::json& body) {
    return guarded([&]() -> ApiResponse {
        if (!body.is_object()) return error_response(400, "BAD_REQUEST", "body must be a JSON object");
        const auto seed = body.find("seed");
        if (seed == body.end() || !non_negative_integer(*seed)) {
            return error_response(400, "BAD_REQUEST", "seed must be a non-negative integer");
        }
        const PriceSeries series = series_from_body(body);
        auto record = store_.create(series, seed->get<std::uint64_t>());
        return {201, {{"session_id", record->session.id()}, {"commitment", record->session.commitment()}}};
    });
}

ApiResponse SessionService::next_bar(const std::string& session_id) {
    return guarded([&]() -> ApiResponse {
        auto record = store_.find(session_id);
        if (!record) throw Error(ErrorCode::NotFound, "no session " + session_id);
        std::lock_guard lock(record->mutex);
        const auto bar = record->session.next_bar();
        store_.persist_state(*record);
        if (!bar) return {204, nullptr};
        return {200, to_json(*bar)};
    });
}

ApiResponse SessionService::submit_prediction(const std::string& session_id, const nlohmann::json& body) {
    return guarded([&]() -> ApiResponse {
        auto record = store_.find(session_id);
        if (!record) throw Error(ErrorCode::NotFound, "no session " + session_id);
        if (!body.is_object() || !body.contains("bar_index") || !non_negative_integer(body.at("bar_index"))) {
            return error_response(400, "BAD_REQUEST", "bar_index must be a non-negative integer");
        }
        const std::string dir = body.value("expected_direction", "");
        if (dir != "up" && dir != "down") {
            return error_response(400, "BAD_REQUEST", "expected_direction must be \"up\" or \"down\"");
        }
        Prediction p{body.at("bar_index").get<std::size_t>(), dir == "up" ? Direction::Up : Direction::Down,
                     body.value("note", "")};
        std::lock_guard lock(record->mutex);
        const LedgerEntry& entry = record->session.submit_prediction(p);
        store_.persist_ledger_entry(*record, entry);
        return {201, {{"entry_hash", entry.hash}, {"chain_length", record->session.ledger().size()}}};
    });
}

ApiResponse SessionService::seal(const std::string& session_id) {
    return guarded([&]() -> ApiResponse {
        auto record = store_.find(session_id);
        if (!record) throw Error(ErrorCode::NotFound, "no session " + session_id);
        std::lock_guard lock(record->mutex);
        record->session.seal();
        store_.persist_ledger_entry(*record, record->session.ledger().back());
        store_.persist_state(*record);
        return {200, {{"state", "sealed"}, {"chain_length", record->session.ledger().size()}}};
    });
}

ApiResponse SessionService::reveal(const std::string& session_id) {
    return guarded([&]() -> ApiResponse {
        auto record = store_.find(session_id);
        if (!record) throw Error(ErrorCode::NotFound, "no session " + session_id);
        std::lock_guard lock(record->mutex);
        if (record->reveal) return {200, *record->reveal};
        const std::size_t before = record->session.ledger().size();
        const RevealResult result = record->session.seal_and_reveal();
        const auto ledger = record->session.ledger();
        for (std::size_t i = before; i < ledger.size(); ++i) store_.persist_ledger_entry(*record, ledger[i]);
        store_.persist_state(*record);
        store_.persist_reveal(*record, result);
        return {200, *record->reveal};
    });
}

ApiResponse SessionService::report(const std::string& session_id, const std::map<std::string, std::string>& query) {
    return guarded([&]() -> ApiResponse {
        auto record = store_.find(session_id);
        if (!record) throw Error(ErrorCode::NotFound, "no session " + session_id);
        EvaluationConfig config;
        try {
            if (auto it = query.find("horizon"); it != query.end() && !it->second.empty()) {
                config.horizon_bars = std::stoul(it->second);
            }
            if (auto it = query.find("atr"); it != query.end() && !it->second.empty()) {
                config.atr_window = std::stoul(it->second);
            }
            if (auto it = query.find("k"); it != query.end() && !it->second.empty()) {
                config.hit_multiplier = std::stod(it->second);
            }
        } catch (const std::exception&) {
            return error_response(400, "BAD_REQUEST", "horizon, atr and k must be numbers");
        }
        std::lock_guard lock(record->mutex);
        if (record->session.state() != SessionState::Revealed) {
            throw Error(ErrorCode::NotRevealed, "report is available after reveal");
        }
        const auto predictions = ledger_predictions(record->session.ledger());
        return {200, to_json(evaluate_predictions(record->session.original_series(), predictions, config))};
    });
}

// ------------------------------------------------------------------- HTTP

namespace {

void send(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    if (api.status != 204) res.set_content(api.body.dump(), "application/json");
}

nlohmann::json body_json(const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    return nlohmann::json::parse(req.body, nullptr, false);
}

}  // namespace

void SessionService::install_routes() {
    httplib::Server& srv = *server_;
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    srv.Get("/health", [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });

    srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        const auto body = body_json(req);
        if (body.is_discarded()) return send(res, error_response(400, "BAD_REQUEST", "body is not valid JSON"));
        send(res, create_session(body));
    });
    srv.Get(R"(/sessions/([^/]+)/bars/next)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, next_bar(req.matches[1]));
    });
    srv.Post(R"(/sessions/([^/]+)/predictions)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto body = body_json(req);
        if (body.is_discarded()) return send(res, error_response(400, "BAD_REQUEST", "body is not valid JSON"));
        send(res, submit_prediction(req.matches[1], body));
    });
    srv.Post(R"(/sessions/([^/]+)/seal)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, seal(req.matches[1]));
    });
    srv.Post(R"(/sessions/([^/]+)/reveal)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, reveal(req.matches[1]));
    });
    srv.Get(R"(/sessions/([^/]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query[k] = v;
        send(res, report(req.matches[1], query));
    });

    srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (res.body.empty()) {
            const ApiResponse api =
                error_response(res.status, res.status == 404 ? "NOT_FOUND" : "HTTP_ERROR", "no route for " + req.path);
            res.set_content(api.body.dump(), "application/json");
        }
    });
}

bool SessionService::listen(const std::string& host, int port) { return server_->listen(host, port); }

int SessionService::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool SessionService::listen_after_bind() { return server_->listen_after_bind(); }

void SessionService::stop() { server_->stop(); }

}  // namespace qgms
