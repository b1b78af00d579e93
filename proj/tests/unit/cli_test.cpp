#include "cli.hpp"
#include "qgms/blind_harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace qgms {
namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_series(const test::TempDir& dir, const std::string& name, const PriceSeries& s) {
    const auto path = dir / name;
    std::ofstream(path) << write_csv(s);
    return path.string();
}

TEST(Cli, UnknownFlagIsUsageError) {
    test::TempDir dir;
    std::mt19937_64 rng(1);
    const auto input = write_series(dir, "s.csv", test::random_ohlc(rng, 20));
    const auto r = run({"analyze", "--input", input, "--frobnicate"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("frobnicate"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"blind"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, IngestNormalizes) {
    test::TempDir dir;
    std::ofstream(dir / "EURUSD_1D.csv") << "timestamp,open,high,low,close\n"
                                            "2015-01-15T10:30:00+01:00,1.2000,1.2010,1.1980,1.1990\n";
    const auto r = run({"ingest", "--input", (dir / "EURUSD_1D.csv").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "timestamp,open,high,low,close\n2015-01-15T09:30:00Z,1.2,1.201,1.198,1.199\n");
    EXPECT_NE(r.err.find("EURUSD"), std::string::npos);

    const auto to_file = run({"ingest", "--input", (dir / "EURUSD_1D.csv").string(), "--output", (dir / "o.csv").string()});
    EXPECT_EQ(to_file.code, 0);
    std::ifstream in(dir / "o.csv");
    EXPECT_EQ(std::string(std::istreambuf_iterator<char>(in), {}), r.out);

    std::ofstream(dir / "bad.csv") << "timestamp,open,high,low,close\n2015-01-15T09:30:00Z,1,1,2,1\n";
    const auto bad = run({"ingest", "--input", (dir / "bad.csv").string()});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("INVARIANT_VIOLATION"), std::string::npos);
    EXPECT_EQ(run({"ingest", "--input", (dir / "missing.csv").string()}).code, 2);
}

TEST(Cli, AnalyzeJsonIsByteIdenticalUnderAffineMaps) {
    test::TempDir dir;
    std::mt19937_64 rng(12);
    const PriceSeries s = test::random_ohlc(rng, 250);
    const auto a = run({"analyze", "--input", write_series(dir, "A_1H.csv", s), "--levels", "3", "--rho", "0.382",
                        "--epsilon", "0.15", "--delta", "0.15", "--format", "json"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto doc = nlohmann::json::parse(a.out);
    EXPECT_TRUE(doc.contains("tree"));
    EXPECT_TRUE(doc.contains("terminal_zones"));
    EXPECT_EQ(doc["bar_count"], 250);
    const auto b = run({"analyze", "--input",
                        write_series(dir, "B_1H.csv", affine_transform(s, Decimal::parse("0.001"), Decimal(10000))),
                        "--levels", "3", "--rho", "0.382", "--epsilon", "0.15", "--delta", "0.15"});
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);

    const auto text = run({"analyze", "--input", (dir / "A_1H.csv").string(), "--format", "text"});
    EXPECT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("terminal zone"), std::string::npos);
}

TEST(Cli, AnalyzeFlagValidation) {
    test::TempDir dir;
    std::mt19937_64 rng(1);
    const auto path = write_series(dir, "A_1H.csv", test::random_ohlc(rng, 20));
    EXPECT_EQ(run({"analyze", "--input", path, "--rho", "abc"}).code, 2);
    EXPECT_EQ(run({"analyze", "--input", path, "--rho", "1.2"}).code, 2);
    EXPECT_EQ(run({"analyze", "--input", path, "--epsilon", "1.5"}).code, 2);
    EXPECT_EQ(run({"analyze", "--input", path, "--levels", "0"}).code, 2);
    EXPECT_EQ(run({"analyze", "--input", path, "--format", "xml"}).code, 2);
    std::ofstream(dir / "empty.csv") << "timestamp,open,high,low,close\n";
    EXPECT_EQ(run({"analyze", "--input", (dir / "empty.csv").string()}).code, 1);
}

struct SessionFiles {
    std::string ledger, manifest, commitment, series;
};

SessionFiles honest_session(const test::TempDir& dir) {
    std::mt19937_64 rng(2);
    const PriceSeries s = test::random_ohlc(rng, 60);
    BlindSession session = BlindSession::create(s, 77, test::stepping_clock());
    for (int i = 0; i < 30; ++i) session.next_bar();
    for (std::size_t i = 0; i < 5; ++i) session.submit_prediction({10 + i, Direction::Up, ""});
    const auto r = session.seal_and_reveal();
    SessionFiles f{(dir / "s.jsonl").string(), (dir / "m.json").string(), session.commitment(),
                   write_series(dir, "ORIG_4H.csv", s)};
    std::ofstream ledger(f.ledger);
    for (const auto& e : session.ledger()) ledger << e.to_json_line() << '\n';
    std::ofstream(f.manifest) << r.manifest.canonical_json();
    return f;
}

TEST(Cli, BlindVerify) {
    test::TempDir dir;
    const auto f = honest_session(dir);
    const auto ok = run({"blind", "verify", "--ledger", f.ledger, "--manifest", f.manifest, "--commitment", f.commitment,
                         "--series", f.series});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(nlohmann::json::parse(ok.out)["chain_ok"], true);

    std::string content;
    {
        std::ifstream in(f.ledger);
        content.assign(std::istreambuf_iterator<char>(in), {});
    }
    // Flip one byte inside the third entry.
    std::size_t line_start = 0;
    for (int i = 0; i < 2; ++i) line_start = content.find('\n', line_start) + 1;
    content[line_start + 20] ^= 0x01;
    std::ofstream(f.ledger) << content;
    const auto bad =
        run({"blind", "verify", "--ledger", f.ledger, "--manifest", f.manifest, "--commitment", f.commitment});
    EXPECT_NE(bad.code, 0);
    EXPECT_NE(bad.err.find("first broken link: 2"), std::string::npos) << bad.err;

    EXPECT_EQ(run({"blind", "verify", "--ledger", f.ledger, "--manifest", f.manifest}).code, 2);
    EXPECT_EQ(run({"blind", "verify", "--ledger", (dir / "no").string(), "--manifest", f.manifest, "--commitment", "x"}).code,
              1);
}

TEST(Cli, Evaluate) {
    test::TempDir dir;
    const auto f = honest_session(dir);
    const auto r = run({"evaluate", "--ledger", f.ledger, "--series", f.series, "--horizon", "10", "--atr", "5", "--k", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["records"].size(), 5u);
    const auto text = run({"evaluate", "--ledger", f.ledger, "--series", f.series, "--format", "text"});
    EXPECT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("hit rate"), std::string::npos);
    EXPECT_EQ(run({"evaluate", "--ledger", f.ledger, "--series", f.series, "--k", "-1"}).code, 2);
}

}  // namespace
}  // namespace qgms
