#pragma once

#include "qgms/defaults.hpp"

#include "qgms/hierarchy.hpp"

#include <span>
#include <vector>

namespace qgms {

struct TerminalZone {
    std::size_t bar_index = 0;  // end of the saturated parent segment
    Direction expected_direction = Direction::Flat;
    NodePath parent_path;
    double parent_saturation = 0.0;
    double child_saturation = 0.0;

    friend bool operator==(const TerminalZone&, const TerminalZone&) = default;
};

struct DetectorConfig {
    double epsilon = defaults::kEpsilon;
    double delta = defaults::kDelta;

    /// Throws Error(InvalidConfig) unless both lie in (0, 1).
    void validate() const;
};

/// Emits a zone for every node P with children such that
///   - P's gauge against its scoring region (parent role, or own role at a
///     root) is >= 1 - epsilon,
///   - P's last child C has gauge >= 1 - delta against P's role region, and
///   - C moves in P's direction.
/// The expected direction is P's reversed. Output is sorted by bar index.
std::vector<TerminalZone> detect_terminal_zones(std::span<const StructureNode> roots, const DetectorConfig& config,
                                                const RoleRegionTable& table);

}  // namespace qgms
