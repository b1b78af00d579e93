#include "qgms/metrics.hpp"

#include "qgms/error.hpp"

#include <algorithm>
#include <cmath>

namespace qgms {

void EvaluationConfig::validate() const {
    if (horizon_bars == 0 || atr_window == 0 || !(hit_multiplier > 0.0) || !std::isfinite(hit_multiplier)) {
        throw Error(ErrorCode::InvalidConfig, "horizon, atr window and hit multiplier must be positive");
    }
}

double max_drawdown(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptySequence, "max_drawdown of an empty sequence");
    double peak = values[0];
    double worst = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveValue, "max_drawdown needs strictly positive values");
        peak = std::max(peak, v);
        worst = std::max(worst, (peak - v) / peak);
    }
    return worst;
}

Decimal true_range_sum(const PriceSeries& series, std::size_t index, std::size_t window, std::size_t& count) {
    const std::size_t first = index + 1 >= window ? index + 1 - window : 0;
    Decimal sum;
    count = 0;
    for (std::size_t j = first; j <= index; ++j) {
        const Bar& bar = series[j];
        Decimal tr = bar.high - bar.low;
        if (j > 0) {
            const Decimal& prev = series[j - 1].close;
            tr = std::max({tr, (bar.high - prev).abs(), (bar.low - prev).abs()});
        }
        sum = sum + tr;
        ++count;
    }
    return sum;
}

double average_true_range(const PriceSeries& series, std::size_t index, std::size_t window) {
    if (index >= series.size()) throw Error(ErrorCode::IndexOutOfRange, "ATR index outside series");
    std::size_t count = 0;
    const Decimal sum = true_range_sum(series, index, window, count);
    return sum.to_double() / static_cast<double>(count);
}

MetricsReport evaluate_predictions(const PriceSeries& series, std::span<const Prediction> predictions,
                                   const EvaluationConfig& config) {
    config.validate();
    MetricsReport report;
    if (!series.empty()) {
        std::vector<double> closes;
        closes.reserve(series.size());
        for (const Bar& b : series.bars()) closes.push_back(b.close.to_double());
        report.max_drawdown_over_series = max_drawdown(closes);
    }

    const Decimal k = Decimal::from_double(config.hit_multiplier);
    std::size_t hits = 0;
    double rr_sum = 0.0;
    std::size_t rr_count = 0;
    for (const Prediction& p : predictions) {
        if (p.bar_index >= series.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "prediction at bar " + std::to_string(p.bar_index) +
                                                        " outside series of " + std::to_string(series.size()));
        }
        if (p.expected_direction == Direction::Flat) {
            throw Error(ErrorCode::InvalidConfig, "prediction direction must be up or down");
        }
        const bool up = p.expected_direction == Direction::Up;
        const std::size_t i = p.bar_index;
        const std::size_t last = std::min(series.size() - 1, i + config.horizon_bars);
        const Decimal& entry = series[i].close;

        Decimal mfe;
        Decimal mae;
        for (std::size_t j = i + 1; j <= last; ++j) {
            const Decimal move = up ? series[j].close - entry : entry - series[j].close;
            if (move > mfe) mfe = move;
            if (-move > mae) mae = -move;
        }

        std::size_t tr_count = 0;
        const Decimal tr_sum = true_range_sum(series, i, config.atr_window, tr_count);

        PredictionRecord rec;
        rec.bar_index = i;
        rec.direction = p.expected_direction;
        rec.mfe = mfe.to_double();
        rec.mae = mae.to_double();
        rec.truncated = i + config.horizon_bars > series.size() - 1;
        rec.atr = tr_sum.to_double() / static_cast<double>(tr_count);
        // mfe >= k * (tr_sum / tr_count), cross-multiplied to stay exact.
        rec.hit = mfe.sign() > 0 && mfe * Decimal(static_cast<long long>(tr_count)) >= k * tr_sum;
        if (mae.sign() == 0) {
            rec.no_adverse = true;
        } else {
            rec.rr = exact_ratio(mfe, mae);
            rr_sum += *rec.rr;
            ++rr_count;
        }
        if (rec.hit) ++hits;
        report.records.push_back(rec);
    }
    if (!report.records.empty()) {
        report.hit_rate = static_cast<double>(hits) / static_cast<double>(report.records.size());
    }
    if (rr_count > 0) report.mean_rr = rr_sum / static_cast<double>(rr_count);
    return report;
}

}  // namespace qgms
