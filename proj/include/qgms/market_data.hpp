#pragma once

#include "qgms/decimal.hpp"
#include "qgms/time.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgms {

struct Bar {
    Timestamp timestamp{};
    Decimal open;
    Decimal high;
    Decimal low;
    Decimal close;
    std::optional<Decimal> volume;

    friend bool operator==(const Bar&, const Bar&) = default;
};

/// Throws Error(InvariantViolation) unless prices are positive, the
/// high/low envelope contains open and close, and volume is non-negative.
void validate_bar(const Bar& bar);

/// Immutable, validated OHLC series. Empty series are representable (a
/// header-only CSV parses fine) but rejected by every analytical operation.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string symbol, std::string timeframe, std::vector<Bar> bars);

    const std::string& symbol() const { return symbol_; }
    const std::string& timeframe() const { return timeframe_; }
    std::span<const Bar> bars() const { return bars_; }
    const Bar& operator[](std::size_t i) const { return bars_[i]; }
    std::size_t size() const { return bars_.size(); }
    bool empty() const { return bars_.empty(); }

    std::vector<Decimal> closes() const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::string symbol_;
    std::string timeframe_;
    std::vector<Bar> bars_;
};

/// Throws Error(EmptySeries) when the series has no bars.
void require_non_empty(const PriceSeries& series);

inline constexpr std::string_view kCsvHeader = "timestamp,open,high,low,close";
inline constexpr std::string_view kCsvHeaderWithVolume = "timestamp,open,high,low,close,volume";

PriceSeries parse_csv(std::string_view text, std::string symbol = {}, std::string timeframe = {});

/// Reads a CSV file. Symbol and timeframe default to the `SYMBOL_TIMEFRAME.csv`
/// filename convention (e.g. `EURUSD_1D.csv`) when not given explicitly.
PriceSeries load_csv(const std::filesystem::path& path, std::optional<std::string> symbol = std::nullopt,
                     std::optional<std::string> timeframe = std::nullopt);

/// Canonical CSV: LF endings, UTC timestamps, shortest exact decimal prices.
/// A volume column is written when any bar carries a volume.
std::string write_csv(const PriceSeries& series);

/// Every price p becomes a*p + b, computed exactly.
PriceSeries affine_transform(const PriceSeries& series, const Decimal& a, const Decimal& b);
PriceSeries affine_transform(const PriceSeries& series, double a, double b);

/// Builds a series from close prices alone (open = close = high = low),
/// one bar per day starting at 2000-01-01. Handy for analysis and tests.
PriceSeries series_from_closes(std::span<const Decimal> closes, std::string symbol = "SYNTH",
                               std::string timeframe = "1D");
PriceSeries series_from_closes(std::span<const double> closes, std::string symbol = "SYNTH",
                               std::string timeframe = "1D");

}  // namespace qgms
