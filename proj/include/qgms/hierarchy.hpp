#pragma once

#include "qgms/defaults.hpp"

#include "qgms/encoding.hpp"
#include "qgms/segmentation.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qgms {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Box in coefficient space: the permissible behaviors for a child segment.
struct AdmissibleRegion {
    std::array<Interval, kComponentCount> bounds{};

    const Interval& operator[](Component c) const { return bounds[static_cast<std::size_t>(c)]; }
    Interval& operator[](Component c) { return bounds[static_cast<std::size_t>(c)]; }
    double center(Component c) const { return 0.5 * ((*this)[c].lo + (*this)[c].hi); }
    double halfwidth(Component c) const { return 0.5 * ((*this)[c].hi - (*this)[c].lo); }
    bool contains(const StructuralCoefficient& c) const;

    /// Throws Error(InvalidConfig) when a bound leaves the component's global
    /// range or an interval is inverted.
    void validate() const;

    static AdmissibleRegion full_space();
    friend bool operator==(const AdmissibleRegion&, const AdmissibleRegion&) = default;
};

/// Role -> region lookup. Regions depend on the parent's role only.
struct RoleRegionTable {
    std::array<AdmissibleRegion, 3> regions{};

    const AdmissibleRegion& operator[](StructuralRole r) const { return regions[static_cast<std::size_t>(r)]; }
    AdmissibleRegion& operator[](StructuralRole r) { return regions[static_cast<std::size_t>(r)]; }
    void validate() const;

    /// Impulsive:     e [0.1, 1.0]  r [0, 2]  b [0.2, 1.0]  k [0, 1]
    /// Corrective:    e [0, 0.9]    r [0, 4]  b [0, 1]      k [0, 1]
    /// Consolidative: e [0, 0.7]    r [0, 4]  b [0, 1]      k [0, 1]
    static RoleRegionTable defaults();
};

AdmissibleRegion admissible_region(StructuralRole parent_role, const RoleRegionTable& table);

struct Saturation {
    double score = 0.0;
    Component component = Component::Efficiency;  // where the maximum is attained
};

/// Box gauge: max over components of |c_k - center_k| / halfwidth_k, skipping
/// zero-halfwidth components. 0 at the center, 1 on the boundary, >1 outside.
/// Throws Error(DegenerateRegion) if every halfwidth is zero.
Saturation saturation(const StructuralCoefficient& c, const AdmissibleRegion& region);
double saturation_score(const StructuralCoefficient& c, const AdmissibleRegion& region);

struct StructureNode {
    Segment segment;
    StructuralCoefficient coefficient;
    StructuralRole role = StructuralRole::Corrective;
    std::size_t level = 0;  // 0 is the finest scale
    std::vector<StructureNode> children;

    friend bool operator==(const StructureNode&, const StructureNode&) = default;
};

struct HierarchyConfig {
    std::size_t levels = defaults::kLevels;
    Decimal rho0 = Decimal::parse(defaults::kRho);
    Decimal gamma = Decimal::parse(defaults::kGamma);
    std::size_t min_bars = defaults::kMinBars;
    RoleThresholds thresholds;
    RoleRegionTable table = RoleRegionTable::defaults();

    /// rho0 * gamma^level, exact.
    Decimal rho_at(std::size_t level) const;
    /// Throws Error(InvalidConfig): levels >= 1, gamma > 1, and every rung of
    /// the threshold ladder inside (0, 1).
    void validate() const;
};

/// Multi-scale decomposition. The coarsest level (levels - 1) segments the
/// whole series; each node's span is re-segmented one rung finer to produce
/// its children, down to level 0. A span that re-segments into itself stays
/// childless.
std::vector<StructureNode> build_tree(const PriceSeries& series, const HierarchyConfig& config = {});

/// Index path from a forest root: {root, child, grandchild, ...}.
using NodePath = std::vector<std::size_t>;

struct Violation {
    NodePath path;
    Component component = Component::Efficiency;
    double score = 0.0;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every embedded node whose gauge against its parent role's region exceeds
/// 1. Roots themselves are never reported.
std::vector<Violation> check_admissibility(const StructureNode& root, const RoleRegionTable& table,
                                           const NodePath& root_path = {});
std::vector<Violation> check_admissibility(std::span<const StructureNode> roots, const RoleRegionTable& table);

/// Region a node is scored against: its parent's role region, or its own
/// role's region for roots.
const AdmissibleRegion& scoring_region(const StructureNode& node, const StructureNode* parent,
                                       const RoleRegionTable& table);

}  // namespace qgms
