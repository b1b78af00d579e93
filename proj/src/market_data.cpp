#include "qgms/market_data.hpp"

#include "qgms/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgms {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string row_context(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

Decimal parse_price(std::string_view field, std::string_view name, std::size_t line_no) {
    try {
        return Decimal::parse(field);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::MalformedRow,
                    row_context(line_no) + "non-numeric " + std::string(name) + " '" + std::string(field) + "'");
    }
}

Decimal transform_price(const Decimal& p, const Decimal& a, const Decimal& b, std::size_t index) {
    Decimal out = a * p + b;
    if (out.sign() <= 0) {
        throw Error(ErrorCode::OffsetUnderflow,
                    "affine_transform: bar " + std::to_string(index) + " maps to non-positive price " + out.to_string());
    }
    return out;
}

}  // namespace

void validate_bar(const Bar& bar) {
    const auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::InvariantViolation, "bar at " + format_rfc3339(bar.timestamp) + ": " + what);
    };
    if (bar.open.sign() <= 0 || bar.high.sign() <= 0 || bar.low.sign() <= 0 || bar.close.sign() <= 0) {
        fail("prices must be strictly positive");
    }
    if (bar.low > std::min(bar.open, bar.close)) fail("low above open/close");
    if (bar.high < std::max(bar.open, bar.close)) fail("high below open/close");
    if (bar.volume && bar.volume->sign() < 0) fail("negative volume");
}

PriceSeries::PriceSeries(std::string symbol, std::string timeframe, std::vector<Bar> bars)
    : symbol_(std::move(symbol)), timeframe_(std::move(timeframe)), bars_(std::move(bars)) {
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        validate_bar(bars_[i]);
        if (i > 0 && bars_[i].timestamp <= bars_[i - 1].timestamp) {
            throw Error(ErrorCode::NonMonotonicTime, "timestamp at bar " + std::to_string(i) + " (" +
                                                         format_rfc3339(bars_[i].timestamp) +
                                                         ") does not increase");
        }
    }
}

std::vector<Decimal> PriceSeries::closes() const {
    std::vector<Decimal> out;
    out.reserve(bars_.size());
    for (const auto& bar : bars_) out.push_back(bar.close);
    return out;
}

void require_non_empty(const PriceSeries& series) {
    if (series.empty()) throw Error(ErrorCode::EmptySeries, "series '" + series.symbol() + "' has no bars");
}

PriceSeries parse_csv(std::string_view text, std::string symbol, std::string timeframe) {
    if (text.find('\r') != std::string_view::npos) {
        throw Error(ErrorCode::MalformedRow, "CR characters found; expected LF line endings");
    }
    std::vector<std::string_view> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorCode::MalformedRow, "line 1: missing header");

    bool has_volume = false;
    if (lines[0] == kCsvHeaderWithVolume) {
        has_volume = true;
    } else if (lines[0] != kCsvHeader) {
        throw Error(ErrorCode::MalformedRow, "line 1: unexpected header '" + std::string(lines[0]) + "'");
    }
    const std::size_t columns = has_volume ? 6 : 5;

    std::vector<Bar> bars;
    bars.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split(lines[i], ',');
        if (fields.size() != columns) {
            throw Error(ErrorCode::MalformedRow, row_context(line_no) + "expected " + std::to_string(columns) +
                                                     " columns, got " + std::to_string(fields.size()));
        }
        Bar bar;
        const auto ts = parse_rfc3339(fields[0]);
        if (!ts) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(line_no) + "bad RFC 3339 timestamp '" + std::string(fields[0]) + "'");
        }
        bar.timestamp = *ts;
        bar.open = parse_price(fields[1], "open", line_no);
        bar.high = parse_price(fields[2], "high", line_no);
        bar.low = parse_price(fields[3], "low", line_no);
        bar.close = parse_price(fields[4], "close", line_no);
        if (has_volume && !fields[5].empty()) bar.volume = parse_price(fields[5], "volume", line_no);
        try {
            validate_bar(bar);
        } catch (const Error& e) {
            throw Error(e.code(), row_context(line_no) + e.what());
        }
        bars.push_back(std::move(bar));
    }
    return PriceSeries(std::move(symbol), std::move(timeframe), std::move(bars));
}

PriceSeries load_csv(const std::filesystem::path& path, std::optional<std::string> symbol,
                     std::optional<std::string> timeframe) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    const std::string stem = path.stem().string();
    const std::size_t underscore = stem.rfind('_');
    if (!symbol) symbol = underscore == std::string::npos ? stem : stem.substr(0, underscore);
    if (!timeframe) timeframe = underscore == std::string::npos ? std::string{} : stem.substr(underscore + 1);
    return parse_csv(buf.str(), std::move(*symbol), std::move(*timeframe));
}

std::string write_csv(const PriceSeries& series) {
    const bool with_volume =
        std::any_of(series.bars().begin(), series.bars().end(), [](const Bar& b) { return b.volume.has_value(); });
    std::string out(with_volume ? kCsvHeaderWithVolume : kCsvHeader);
    out += '\n';
    for (const auto& bar : series.bars()) {
        out += format_rfc3339(bar.timestamp);
        for (const Decimal* p : {&bar.open, &bar.high, &bar.low, &bar.close}) {
            out += ',';
            out += p->to_string();
        }
        if (with_volume) {
            out += ',';
            if (bar.volume) out += bar.volume->to_string();
        }
        out += '\n';
    }
    return out;
}

PriceSeries affine_transform(const PriceSeries& series, const Decimal& a, const Decimal& b) {
    if (a.sign() <= 0) throw Error(ErrorCode::NonPositiveScale, "affine_transform: scale must be positive");
    std::vector<Bar> bars;
    bars.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Bar& src = series[i];
        Bar bar;
        bar.timestamp = src.timestamp;
        bar.open = transform_price(src.open, a, b, i);
        bar.high = transform_price(src.high, a, b, i);
        bar.low = transform_price(src.low, a, b, i);
        bar.close = transform_price(src.close, a, b, i);
        bar.volume = src.volume;
        bars.push_back(std::move(bar));
    }
    return PriceSeries(series.symbol(), series.timeframe(), std::move(bars));
}

PriceSeries affine_transform(const PriceSeries& series, double a, double b) {
    if (!(a > 0.0)) throw Error(ErrorCode::NonPositiveScale, "affine_transform: scale must be positive");
    return affine_transform(series, Decimal::from_double(a), Decimal::from_double(b));
}

PriceSeries series_from_closes(std::span<const Decimal> closes, std::string symbol, std::string timeframe) {
    using namespace std::chrono;
    const Timestamp origin{sys_days{year{2000} / January / 1}};
    std::vector<Bar> bars;
    bars.reserve(closes.size());
    for (std::size_t i = 0; i < closes.size(); ++i) {
        Bar bar;
        bar.timestamp = origin + days{static_cast<long>(i)};
        bar.open = bar.high = bar.low = bar.close = closes[i];
        bars.push_back(std::move(bar));
    }
    return PriceSeries(std::move(symbol), std::move(timeframe), std::move(bars));
}

PriceSeries series_from_closes(std::span<const double> closes, std::string symbol, std::string timeframe) {
    std::vector<Decimal> exact;
    exact.reserve(closes.size());
    for (double c : closes) exact.push_back(Decimal::from_double(c));
    return series_from_closes(std::span<const Decimal>(exact), std::move(symbol), std::move(timeframe));
}

}  // namespace qgms
