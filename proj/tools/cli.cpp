#include "cli.hpp"

#include "qgms/blind_harness.hpp"
#include "qgms/defaults.hpp"
#include "qgms/detector.hpp"
#include "qgms/error.hpp"
#include "qgms/hierarchy.hpp"
#include "qgms/json_io.hpp"
#include "qgms/market_data.hpp"
#include "qgms/metrics.hpp"
#include "qgms/session_service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <pthread.h>
#include <stdexcept>
#include <thread>

namespace qgms::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------ flags

struct IngestFlags {
    std::string input;
    std::string symbol;
    std::string timeframe;
    std::string output;
};

struct AnalyzeFlags {
    std::string input;
    std::size_t levels = defaults::kLevels;
    std::string rho{defaults::kRho};
    std::string gamma{defaults::kGamma};
    std::size_t min_bars = defaults::kMinBars;
    double epsilon = defaults::kEpsilon;
    double delta = defaults::kDelta;
    std::string format = "json";
};

struct ServeFlags {
    std::string host{defaults::kHost};
    int port = defaults::kPort;
    std::string data_dir{defaults::kDataDir};
};

struct VerifyFlags {
    std::string ledger;
    std::string manifest;
    std::string commitment;
    std::string series;
};

struct EvaluateFlags {
    std::string ledger;
    std::string series;
    std::size_t horizon = defaults::kHorizonBars;
    std::size_t atr = defaults::kAtrWindow;
    double k = defaults::kHitMultiplier;
    std::string format = "json";
};

Decimal decimal_flag(const std::string& text, const char* name) {
    try {
        return Decimal::parse(text);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string("--") + name + ": not a decimal number: " + text);
    }
}

template <typename F>
void validate_flags(F&& check) {
    try {
        check();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

// --------------------------------------------------------------- commands

int cmd_ingest(const IngestFlags& f, std::ostream& out, std::ostream& err) {
    const PriceSeries series =
        load_csv(f.input, f.symbol.empty() ? std::nullopt : std::optional(f.symbol),
                 f.timeframe.empty() ? std::nullopt : std::optional(f.timeframe));
    const std::string csv = write_csv(series);
    if (f.output.empty() || f.output == "-") {
        out << csv;
    } else {
        std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
        if (!file || !(file << csv) || !file.flush()) throw Error(ErrorCode::Storage, "cannot write " + f.output);
    }
    err << "ingested " << series.size() << " bars (" << series.symbol() << ' ' << series.timeframe() << ")\n";
    return kExitOk;
}

void print_tree_text(const StructureNode& node, const RoleRegionTable& table, const StructureNode* parent,
                     std::ostream& out, int depth) {
    const Saturation s = saturation(node.coefficient, scoring_region(node, parent, table));
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "L" << node.level << " [" << node.segment.start_index
        << ", " << node.segment.end_index << "] " << to_string(node.segment.direction) << ' '
        << to_string(node.role) << " e=" << node.coefficient.efficiency << " r=" << node.coefficient.retracement
        << " b=" << node.coefficient.balance << " k=" << node.coefficient.skew << " gauge=" << s.score << '\n';
    for (const auto& child : node.children) print_tree_text(child, table, &node, out, depth + 1);
}

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out) {
    HierarchyConfig hc;
    hc.levels = f.levels;
    hc.rho0 = decimal_flag(f.rho, "rho");
    hc.gamma = decimal_flag(f.gamma, "gamma");
    hc.min_bars = f.min_bars;
    const DetectorConfig dc{f.epsilon, f.delta};
    validate_flags([&] {
        hc.validate();
        dc.validate();
    });

    const PriceSeries series = load_csv(f.input);
    require_non_empty(series);
    const auto roots = build_tree(series, hc);
    const auto zones = detect_terminal_zones(roots, dc, hc.table);
    const auto violations = check_admissibility(roots, hc.table);

    if (f.format == "text") {
        out << series.size() << " bars, " << roots.size() << " top-level segments\n";
        for (const auto& root : roots) print_tree_text(root, hc.table, nullptr, out, 0);
        out << zones.size() << " terminal zone(s)\n";
        for (const auto& z : zones) {
            out << "  bar " << z.bar_index << " expect " << to_string(z.expected_direction)
                << " parent_gauge=" << z.parent_saturation << " child_gauge=" << z.child_saturation << '\n';
        }
        out << violations.size() << " admissibility violation(s)\n";
        return kExitOk;
    }

    nlohmann::json doc;
    doc["config"] = {{"levels", hc.levels},       {"rho", hc.rho0.to_string()},
                     {"gamma", hc.gamma.to_string()}, {"min_bars", hc.min_bars},
                     {"epsilon", dc.epsilon},     {"delta", dc.delta}};
    doc["bar_count"] = series.size();
    doc["tree"] = tree_to_json(roots, hc.table);
    doc["terminal_zones"] = nlohmann::json::array();
    for (const auto& z : zones) doc["terminal_zones"].push_back(to_json(z));
    doc["violations"] = nlohmann::json::array();
    for (const auto& v : violations) doc["violations"].push_back(to_json(v));
    out << doc.dump(2) << '\n';
    return kExitOk;
}

int cmd_serve(const ServeFlags& f, std::ostream& err) {
    if (f.port < 0 || f.port > 65535) throw UsageError("--port must be in [0, 65535]");

    // Handle SIGINT/SIGTERM on a dedicated thread so stop() runs outside a
    // signal handler.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    SessionService service(f.data_dir);
    err << "qgms: serving " << service.store().size() << " stored session(s) from " << f.data_dir << " on "
        << f.host << ':' << f.port << '\n';

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
    });
    const bool ok = service.listen(f.host, f.port);
    if (!ok) {
        err << "qgms: cannot listen on " << f.host << ':' << f.port << '\n';
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    waiter.join();
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    return ok ? kExitOk : kExitDomain;
}

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
    std::optional<PriceSeries> original;
    if (!f.series.empty()) original = load_csv(f.series);
    const VerificationReport report =
        verify_ledger(f.ledger, f.manifest, f.commitment, original ? &*original : nullptr);
    out << report.to_json().dump(2) << '\n';
    if (report.ok()) return kExitOk;
    if (report.first_broken_link) err << "first broken link: " << *report.first_broken_link << '\n';
    if (!report.detail.empty()) err << report.detail << '\n';
    if (!report.commitment_ok) err << "commitment mismatch\n";
    if (report.digest_ok == false) err << "series digest mismatch\n";
    return kExitDomain;
}

void print_metrics_table(const MetricsReport& report, std::ostream& out) {
    out << std::left << std::setw(8) << "bar" << std::setw(6) << "dir" << std::setw(14) << "mfe" << std::setw(14)
        << "mae" << std::setw(12) << "rr" << std::setw(6) << "hit" << "flags\n";
    for (const auto& r : report.records) {
        std::string flags;
        if (r.no_adverse) flags += "no_adverse ";
        if (r.truncated) flags += "truncated";
        out << std::left << std::setw(8) << r.bar_index << std::setw(6) << to_string(r.direction) << std::setw(14)
            << r.mfe << std::setw(14) << r.mae << std::setw(12) << (r.rr ? std::to_string(*r.rr) : "-")
            << std::setw(6) << (r.hit ? "yes" : "no") << flags << '\n';
    }
    out << "hit rate: " << (report.hit_rate ? std::to_string(*report.hit_rate) : "-")
        << "  mean rr: " << (report.mean_rr ? std::to_string(*report.mean_rr) : "-")
        << "  max drawdown: " << report.max_drawdown_over_series << "\n\n";
}

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
    const EvaluationConfig config{f.horizon, f.atr, f.k};
    validate_flags([&] { config.validate(); });

    const auto entries = read_ledger_file(f.ledger);
    const VerificationReport chain = verify_chain(entries, false);
    if (!chain.chain_ok) {
        throw Error(ErrorCode::MalformedLedger,
                    "ledger chain broken at entry " + std::to_string(chain.first_broken_link.value_or(0)) + ": " +
                        chain.detail);
    }
    const PriceSeries series = load_csv(f.series);
    require_non_empty(series);
    const auto predictions = ledger_predictions(entries);
    const MetricsReport report = evaluate_predictions(series, predictions, config);
    if (f.format == "text") print_metrics_table(report, out);
    out << to_json(report).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scale-invariant market structure analysis and blind evaluation"};
    app.name("qgms");
    app.require_subcommand(1);

    IngestFlags ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse and validate a CSV series; emit the normalized file");
    ingest_cmd->add_option("--input", ingest.input, "Input CSV")->required()->check(CLI::ExistingFile);
    ingest_cmd->add_option("--symbol", ingest.symbol, "Symbol (default: from file name)");
    ingest_cmd->add_option("--timeframe", ingest.timeframe, "Timeframe (default: from file name)");
    ingest_cmd->add_option("--output", ingest.output, "Output CSV (default: stdout)");

    AnalyzeFlags analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Build the structure tree and detect terminal zones");
    analyze_cmd->add_option("--input", analyze.input, "Input CSV")->required()->check(CLI::ExistingFile);
    analyze_cmd->add_option("--levels", analyze.levels, "Hierarchy depth")->capture_default_str();
    analyze_cmd->add_option("--rho", analyze.rho, "Finest-scale reversal fraction")->capture_default_str();
    analyze_cmd->add_option("--gamma", analyze.gamma, "Reversal fraction growth per level")->capture_default_str();
    analyze_cmd->add_option("--min-bars", analyze.min_bars, "Minimum bars per segment")->capture_default_str();
    analyze_cmd->add_option("--epsilon", analyze.epsilon, "Parent saturation tolerance")->capture_default_str();
    analyze_cmd->add_option("--delta", analyze.delta, "Child saturation tolerance")->capture_default_str();
    analyze_cmd->add_option("--format", analyze.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    auto* blind_cmd = app.add_subcommand("blind", "Blind evaluation sessions");
    blind_cmd->require_subcommand(1);

    ServeFlags serve;
    auto* serve_cmd = blind_cmd->add_subcommand("serve", "Run the session HTTP service");
    serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", serve.port, "Port")->capture_default_str();
    serve_cmd->add_option("--data-dir", serve.data_dir, "Session storage directory")->capture_default_str();

    VerifyFlags verify;
    auto* verify_cmd = blind_cmd->add_subcommand("verify", "Verify a ledger against a revealed manifest");
    verify_cmd->add_option("--ledger", verify.ledger, "Ledger (JSON Lines)")->required();
    verify_cmd->add_option("--manifest", verify.manifest, "Revealed manifest JSON")->required();
    verify_cmd->add_option("--commitment", verify.commitment, "Commitment published at creation")->required();
    verify_cmd->add_option("--series", verify.series, "Original series CSV (checks the digest)");

    EvaluateFlags evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score ledger predictions against the revealed series");
    evaluate_cmd->add_option("--ledger", evaluate.ledger, "Ledger (JSON Lines)")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--series", evaluate.series, "Revealed original series CSV")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--horizon", evaluate.horizon, "Bars after the prediction")->capture_default_str();
    evaluate_cmd->add_option("--atr", evaluate.atr, "ATR window")->capture_default_str();
    evaluate_cmd->add_option("--k", evaluate.k, "Hit threshold in ATRs")->capture_default_str();
    evaluate_cmd->add_option("--format", evaluate.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    std::vector<const char*> argv{"qgms"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qgms: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return kExitUsage;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(ingest, out, err);
        if (*analyze_cmd) return cmd_analyze(analyze, out);
        if (*serve_cmd) return cmd_serve(serve, err);
        if (*verify_cmd) return cmd_verify(verify, out, err);
        if (*evaluate_cmd) return cmd_evaluate(evaluate, out);
    } catch (const UsageError& e) {
        err << "qgms: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "qgms: " << error_code_name(e.code()) << ": " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "qgms: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace qgms::cli
