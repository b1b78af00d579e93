#include "qgms/encoding.hpp"

#include "qgms/error.hpp"

#include <string>

namespace qgms {

std::string_view to_string(Component c) {
    switch (c) {
        case Component::Efficiency: return "efficiency";
        case Component::Retracement: return "retracement";
        case Component::Balance: return "balance";
        case Component::Skew: return "skew";
    }
    return "?";
}

std::string_view to_string(StructuralRole role) {
    switch (role) {
        case StructuralRole::Impulsive: return "impulsive";
        case StructuralRole::Corrective: return "corrective";
        case StructuralRole::Consolidative: return "consolidative";
    }
    return "?";
}

double StructuralCoefficient::operator[](Component c) const {
    switch (c) {
        case Component::Efficiency: return efficiency;
        case Component::Retracement: return retracement;
        case Component::Balance: return balance;
        case Component::Skew: return skew;
    }
    return 0.0;
}

double component_lower_bound(Component) { return 0.0; }

double component_upper_bound(Component c) { return c == Component::Retracement ? kRetracementCap : 1.0; }

StructuralCoefficient encode(const Segment& segment, const PriceSeries& series) {
    const std::vector<Decimal> closes = series.closes();
    return encode_closes(segment, closes);
}

StructuralCoefficient encode_closes(const Segment& segment, std::span<const Decimal> closes) {
    const std::size_t s = segment.start_index;
    const std::size_t e = segment.end_index;
    if (s > e || e >= closes.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "segment [" + std::to_string(s) + ", " + std::to_string(e) +
                                                    "] outside series of " + std::to_string(closes.size()) +
                                                    " bars");
    }

    Decimal path;
    for (std::size_t k = s; k < e; ++k) path = path + (closes[k + 1] - closes[k]).abs();
    const Decimal net = closes[e] - closes[s];

    StructuralCoefficient c;
    if (path.sign() == 0) {
        c.degenerate = true;
        return c;
    }
    if (net.sign() == 0) {
        c.retracement = kRetracementCap;
        c.degenerate = true;
        return c;
    }

    const bool up = net.sign() > 0;
    const Decimal abs_net = net.abs();
    c.efficiency = exact_ratio(abs_net, path);

    // Largest move against the segment direction between any i < j.
    Decimal excursion;
    std::size_t extreme = s;
    std::size_t with_steps2 = 0;  // doubled so a flat step counts as 1
    for (std::size_t k = s + 1; k <= e; ++k) {
        const Decimal counter = up ? closes[extreme] - closes[k] : closes[k] - closes[extreme];
        if (counter > excursion) excursion = counter;
        if (up ? closes[k] > closes[extreme] : closes[k] < closes[extreme]) extreme = k;

        const int step = (closes[k] - closes[k - 1]).sign();
        if (step == 0) {
            with_steps2 += 1;
        } else if ((step > 0) == up) {
            with_steps2 += 2;
        }
    }
    c.retracement = excursion >= Decimal::from_double(kRetracementCap) * abs_net ? kRetracementCap
                                                                               : exact_ratio(excursion, abs_net);
    const std::size_t steps = e - s;
    c.balance = static_cast<double>(with_steps2) / static_cast<double>(2 * steps);
    c.skew = static_cast<double>(extreme - s) / static_cast<double>(steps);
    return c;
}

StructuralRole classify_role(const StructuralCoefficient& c, const RoleThresholds& thresholds) {
    if (c.efficiency >= thresholds.impulsive_efficiency && c.retracement <= thresholds.impulsive_retracement) {
        return StructuralRole::Impulsive;
    }
    if (c.efficiency <= thresholds.consolidative_efficiency) return StructuralRole::Consolidative;
    return StructuralRole::Corrective;
}

}  // namespace qgms
