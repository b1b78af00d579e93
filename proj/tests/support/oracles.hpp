#pragma once

// Reference implementations used only by tests. They are written against the
// definitions, not against the library code: integer prices, rational
// thresholds, and exhaustive scans.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qgms::oracle {

struct Leg {
    std::size_t start = 0;
    std::size_t end = 0;
    int direction = 0;  // +1 up, -1 down, 0 flat

    friend bool operator==(const Leg&, const Leg&) = default;
};

/// Zigzag pivots on integer closes with threshold rho = rho_num / rho_den.
///
/// A swing that starts at pivot p (confirmed while reading bar q) looks at
/// every later bar j >= q; the extremum is the earliest arg-extreme of
/// closes[p..j], and the swing confirms at the first j where
///   amplitude > 0, extremum - p + 1 >= min_bars, counter >= rho * amplitude.
/// Before the first pivot both directions compete; the earlier extremum wins.
inline std::vector<Leg> zigzag(std::span<const long long> c, long long rho_num, long long rho_den,
                               std::size_t min_bars) {
    if (c.empty()) throw std::invalid_argument("empty");
    const std::size_t n = c.size();
    if (n == 1) return {Leg{0, 0, 0}};

    using i128 = __int128;
    const auto first_argmax = [&](std::size_t lo, std::size_t hi) {
        std::size_t best = lo;
        for (std::size_t k = lo; k <= hi; ++k) {
            if (c[k] > c[best]) best = k;
        }
        return best;
    };
    const auto first_argmin = [&](std::size_t lo, std::size_t hi) {
        std::size_t best = lo;
        for (std::size_t k = lo; k <= hi; ++k) {
            if (c[k] < c[best]) best = k;
        }
        return best;
    };
    // Whether a swing from p in direction d confirms when reading bar j;
    // returns the extremum index through `ext`.
    const auto confirms_at = [&](std::size_t p, int d, std::size_t j, std::size_t& ext) {
        ext = d > 0 ? first_argmax(p, j) : first_argmin(p, j);
        const i128 amplitude = d > 0 ? i128(c[ext]) - c[p] : i128(c[p]) - c[ext];
        const i128 counter = d > 0 ? i128(c[ext]) - c[j] : i128(c[j]) - c[ext];
        return amplitude > 0 && ext - p + 1 >= min_bars && counter * rho_den >= amplitude * rho_num;
    };

    std::vector<std::size_t> pivots{0};
    std::size_t p = 0;
    int d = 0;  // 0 until the first pivot fixes the alternation
    std::size_t j = 1;
    while (j < n) {
        std::size_t ext_up = 0, ext_dn = 0;
        const bool up = d >= 0 && confirms_at(p, +1, j, ext_up);
        const bool dn = d <= 0 && confirms_at(p, -1, j, ext_dn);
        if (!up && !dn) {
            ++j;
            continue;
        }
        int swing;
        std::size_t ext;
        if (up && dn) {
            swing = ext_up <= ext_dn ? +1 : -1;
            ext = std::min(ext_up, ext_dn);
        } else {
            swing = up ? +1 : -1;
            ext = up ? ext_up : ext_dn;
        }
        pivots.push_back(ext);
        p = ext;
        d = -swing;
        // The next swing may confirm while reading the same bar j.
    }
    pivots.push_back(n - 1);

    std::vector<Leg> legs;
    for (std::size_t k = 0; k + 1 < pivots.size(); ++k) {
        const long long a = c[pivots[k]], b = c[pivots[k + 1]];
        legs.push_back(Leg{pivots[k], pivots[k + 1], b > a ? 1 : (b < a ? -1 : 0)});
    }
    return legs;
}

/// Exhaustive max over i <= j of (v[i] - v[j]) / v[i], floored at 0.
inline double max_drawdown(std::span<const double> v) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]) / v[i]);
    }
    return best;
}

/// Close-to-close excursions over (i, i + horizon] by direct scan.
inline void excursions(std::span<const double> closes, std::size_t i, std::size_t horizon, int d, double& mfe,
                       double& mae) {
    mfe = 0.0;
    mae = 0.0;
    for (std::size_t j = i + 1; j <= std::min(i + horizon, closes.size() - 1); ++j) {
        const double move = d * (closes[j] - closes[i]);
        mfe = std::max(mfe, move);
        mae = std::max(mae, -move);
    }
}

}  // namespace qgms::oracle
