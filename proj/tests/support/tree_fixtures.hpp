#pragma once

#include "qgms/hierarchy.hpp"

#include <random>

namespace qgms::test {

inline StructuralCoefficient coef(double e, double r, double b, double k) {
    StructuralCoefficient c;
    c.efficiency = e;
    c.retracement = r;
    c.balance = b;
    c.skew = k;
    return c;
}

inline StructuralCoefficient center_of(const AdmissibleRegion& region) {
    return coef(region.center(Component::Efficiency), region.center(Component::Retracement),
                region.center(Component::Balance), region.center(Component::Skew));
}

/// Region center with one component pushed to gauge `g` (upward).
inline StructuralCoefficient at_gauge(const AdmissibleRegion& region, Component k, double g) {
    StructuralCoefficient c = center_of(region);
    const double v = region.center(k) + g * region.halfwidth(k);
    switch (k) {
        case Component::Efficiency: c.efficiency = v; break;
        case Component::Retracement: c.retracement = v; break;
        case Component::Balance: c.balance = v; break;
        case Component::Skew: c.skew = v; break;
    }
    return c;
}

inline StructureNode node(std::size_t start, std::size_t end, Direction dir, StructuralCoefficient c,
                          StructuralRole role, std::size_t level, std::vector<StructureNode> children = {}) {
    StructureNode n;
    n.segment = Segment{start, end, dir, Decimal(0), Decimal(0)};
    n.coefficient = c;
    n.role = role;
    n.level = level;
    n.children = std::move(children);
    return n;
}

/// Random tree with random coefficients and roles; spans are nested but the
/// coefficients are not derived from prices. For detector fuzzing.
inline StructureNode random_tree(std::mt19937_64& rng, std::size_t start, std::size_t end, std::size_t level) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> role(0, 2);
    std::uniform_int_distribution<int> dir(0, 2);
    const auto random_dir = [&] { return dir(rng) == 0 ? Direction::Down : (dir(rng) == 1 ? Direction::Up : Direction::Flat); };
    StructureNode n = node(start, end, random_dir(), coef(unit(rng), 4.0 * unit(rng), unit(rng), unit(rng)),
                           static_cast<StructuralRole>(role(rng)), level);
    if (level > 0 && end - start >= 2) {
        std::uniform_int_distribution<std::size_t> pieces(1, std::min<std::size_t>(4, end - start));
        const std::size_t count = pieces(rng);
        std::size_t s = start;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t e = i + 1 == count ? end : s + (end - s) / (count - i);
            n.children.push_back(random_tree(rng, s, e, level - 1));
            s = e;
        }
    }
    return n;
}

}  // namespace qgms::test
