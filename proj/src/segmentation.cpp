#include "qgms/segmentation.hpp"

#include "qgms/error.hpp"

#include <optional>

namespace qgms {

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Down: return "down";
        case Direction::Flat: return "flat";
    }
    return "flat";
}

Direction direction_between(const Decimal& from, const Decimal& to) {
    if (to > from) return Direction::Up;
    if (to < from) return Direction::Down;
    return Direction::Flat;
}

Direction reverse(Direction d) {
    switch (d) {
        case Direction::Up: return Direction::Down;
        case Direction::Down: return Direction::Up;
        case Direction::Flat: return Direction::Flat;
    }
    return Direction::Flat;
}

SegmentationConfig SegmentationConfig::with_rho(double rho, std::size_t min_bars) {
    SegmentationConfig config;
    config.rho = Decimal::from_double(rho);
    config.min_bars = min_bars;
    return config;
}

void SegmentationConfig::validate() const {
    if (rho.sign() <= 0 || rho >= Decimal(1)) {
        throw Error(ErrorCode::InvalidConfig, "rho must lie in (0, 1), got " + rho.to_string());
    }
    if (min_bars < 1) throw Error(ErrorCode::InvalidConfig, "min_bars must be >= 1");
}

namespace {

class ZigzagScanner {
public:
    ZigzagScanner(std::span<const Decimal> closes, const SegmentationConfig& config)
        : closes_(closes), config_(config) {}

    std::vector<std::size_t> pivots() {
        std::vector<std::size_t> out{0};
        for (std::size_t j = 1; j < closes_.size(); ++j) {
            if (closes_[j] > closes_[high_]) high_ = j;
            if (closes_[j] < closes_[low_]) low_ = j;
            while (auto confirmed = confirm(j)) {
                out.push_back(confirmed->index);
                start_swing(confirmed->index, reverse(confirmed->swing), j);
            }
        }
        return out;
    }

private:
    struct Confirmation {
        std::size_t index;
        Direction swing;
    };

    bool confirms(std::size_t extremum, const Decimal& amplitude, const Decimal& counter) const {
        return amplitude.sign() > 0 && extremum + 1 - pivot_ >= config_.min_bars &&
               counter >= config_.rho * amplitude;
    }

    std::optional<Confirmation> confirm(std::size_t j) const {
        const Decimal& pivot_close = closes_[pivot_];
        std::optional<Confirmation> up;
        std::optional<Confirmation> down;
        if (swing_ != Direction::Down &&
            confirms(high_, closes_[high_] - pivot_close, closes_[high_] - closes_[j])) {
            up = Confirmation{high_, Direction::Up};
        }
        if (swing_ != Direction::Up &&
            confirms(low_, pivot_close - closes_[low_], closes_[j] - closes_[low_])) {
            down = Confirmation{low_, Direction::Down};
        }
        if (up && down) return up->index <= down->index ? up : down;
        return up ? up : down;
    }

    void start_swing(std::size_t pivot, Direction swing, std::size_t j) {
        pivot_ = pivot;
        swing_ = swing;
        high_ = low_ = pivot;
        for (std::size_t k = pivot + 1; k <= j; ++k) {
            if (closes_[k] > closes_[high_]) high_ = k;
            if (closes_[k] < closes_[low_]) low_ = k;
        }
    }

    std::span<const Decimal> closes_;
    const SegmentationConfig& config_;
    std::size_t pivot_ = 0;
    // Flat marks the bootstrap swing whose direction is not yet known.
    Direction swing_ = Direction::Flat;
    std::size_t high_ = 0;
    std::size_t low_ = 0;
};

}  // namespace

std::vector<Segment> segment_closes(std::span<const Decimal> closes, const SegmentationConfig& config,
                                    std::size_t offset) {
    config.validate();
    if (closes.empty()) throw Error(ErrorCode::EmptySeries, "segmentation of an empty span");
    if (closes.size() == 1) {
        return {Segment{offset, offset, Direction::Flat, closes[0], closes[0]}};
    }

    std::vector<std::size_t> pivots = ZigzagScanner(closes, config).pivots();
    pivots.push_back(closes.size() - 1);

    std::vector<Segment> out;
    out.reserve(pivots.size() - 1);
    for (std::size_t k = 0; k + 1 < pivots.size(); ++k) {
        const std::size_t s = pivots[k];
        const std::size_t e = pivots[k + 1];
        out.push_back(Segment{s + offset, e + offset, direction_between(closes[s], closes[e]), closes[s], closes[e]});
    }
    return out;
}

std::vector<Segment> segment_series(const PriceSeries& series, const SegmentationConfig& config) {
    require_non_empty(series);
    const std::vector<Decimal> closes = series.closes();
    return segment_closes(closes, config);
}

}  // namespace qgms
