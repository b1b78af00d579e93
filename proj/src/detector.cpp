#include "qgms/detector.hpp"

#include "qgms/error.hpp"

#include <algorithm>

namespace qgms {

void DetectorConfig::validate() const {
    const auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(epsilon) || !in_unit(delta)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon and delta must lie in (0, 1)");
    }
}

namespace {

struct ZoneScan {
    const DetectorConfig& config;
    const RoleRegionTable& table;
    std::vector<TerminalZone> zones;

    void visit(const StructureNode& node, const StructureNode* parent, NodePath& path) {
        if (!node.children.empty() && node.segment.direction != Direction::Flat) {
            const StructureNode& last = node.children.back();
            const double ps = saturation_score(node.coefficient, scoring_region(node, parent, table));
            const double cs = saturation_score(last.coefficient, table[node.role]);
            if (ps >= 1.0 - config.epsilon && cs >= 1.0 - config.delta &&
                last.segment.direction == node.segment.direction) {
                zones.push_back(TerminalZone{node.segment.end_index, reverse(node.segment.direction), path, ps, cs});
            }
        }
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            path.push_back(i);
            visit(node.children[i], &node, path);
            path.pop_back();
        }
    }
};

}  // namespace

std::vector<TerminalZone> detect_terminal_zones(std::span<const StructureNode> roots, const DetectorConfig& config,
                                                const RoleRegionTable& table) {
    config.validate();
    ZoneScan scan{config, table, {}};
    NodePath path;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        path.assign(1, i);
        scan.visit(roots[i], nullptr, path);
    }
    std::stable_sort(scan.zones.begin(), scan.zones.end(), [](const TerminalZone& a, const TerminalZone& b) {
        return a.bar_index < b.bar_index;
    });
    return std::move(scan.zones);
}

}  // namespace qgms
