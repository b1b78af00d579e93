#pragma once

#include "qgms/defaults.hpp"

#include "qgms/decimal.hpp"
#include "qgms/market_data.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qgms {

enum class Direction { Up, Down, Flat };

std::string_view to_string(Direction d);
Direction direction_between(const Decimal& from, const Decimal& to);
/// Up <-> Down; Flat stays Flat.
Direction reverse(Direction d);

/// A contiguous geometric phase between two pivot closes. Indices are
/// inclusive and adjacent segments share their pivot bar.
struct Segment {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    Direction direction = Direction::Flat;
    Decimal start_price;
    Decimal end_price;

    std::size_t bar_count() const { return end_index - start_index + 1; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentationConfig {
    /// Reversal threshold as a fraction of the current swing amplitude.
    Decimal rho = Decimal::parse(defaults::kRho);
    std::size_t min_bars = defaults::kMinBars;

    static SegmentationConfig with_rho(double rho, std::size_t min_bars = defaults::kMinBars);
    /// Throws Error(InvalidConfig) unless 0 < rho < 1 and min_bars >= 1.
    void validate() const;
};

/// Zigzag decomposition of close prices.
///
/// A pivot is confirmed at the running extremum of the current swing once
/// the counter-move from that extremum reaches rho times the swing amplitude
/// (extremum close minus previous pivot close). The first swing is measured
/// from closes[0]; until it is confirmed both directions are tracked, and a
/// simultaneous confirmation goes to the earlier extremum. Extremum ties go
/// to the earliest index. Segments tile [0, n-1]; indices in the result are
/// shifted by `offset`.
std::vector<Segment> segment_closes(std::span<const Decimal> closes, const SegmentationConfig& config,
                                    std::size_t offset = 0);

/// segment_closes over the series' closes. Throws Error(EmptySeries).
std::vector<Segment> segment_series(const PriceSeries& series, const SegmentationConfig& config);

}  // namespace qgms
