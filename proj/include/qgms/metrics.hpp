#pragma once

#include "qgms/defaults.hpp"

#include "qgms/market_data.hpp"
#include "qgms/segmentation.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgms {

struct EvaluationConfig {
    std::size_t horizon_bars = defaults::kHorizonBars;
    std::size_t atr_window = defaults::kAtrWindow;
    double hit_multiplier = defaults::kHitMultiplier;

    void validate() const;
};

struct Prediction {
    std::size_t bar_index = 0;
    Direction expected_direction = Direction::Up;
    std::string note;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct PredictionRecord {
    std::size_t bar_index = 0;
    Direction direction = Direction::Up;
    double mfe = 0.0;
    double mae = 0.0;
    std::optional<double> rr;  // empty when no_adverse
    bool no_adverse = false;
    bool hit = false;
    bool truncated = false;
    double atr = 0.0;
};

struct MetricsReport {
    std::vector<PredictionRecord> records;
    std::optional<double> hit_rate;
    std::optional<double> mean_rr;  // over records with an adverse excursion
    double max_drawdown_over_series = 0.0;
};

/// Largest fractional peak-to-trough decline, max over i <= j of
/// (v[i] - v[j]) / v[i], floored at 0.
/// Throws Error(EmptySequence) or Error(NonPositiveValue).
double max_drawdown(std::span<const double> values);

/// Mean true range over the (up to) `window` bars ending at `index`. Bar 0's
/// true range is high - low.
Decimal true_range_sum(const PriceSeries& series, std::size_t index, std::size_t window, std::size_t& count);
double average_true_range(const PriceSeries& series, std::size_t index, std::size_t window);

/// Close-to-close excursions after each prediction over (i, i + horizon].
/// hit iff MFE > 0 and MFE >= hit_multiplier * ATR(i). Excursions, R/R and
/// the hit test are computed exactly, so they are invariant under price
/// offsets and R/R and hits are invariant under positive scaling.
MetricsReport evaluate_predictions(const PriceSeries& series, std::span<const Prediction> predictions,
                                   const EvaluationConfig& config = {});

}  // namespace qgms
