#include "qgms/hierarchy.hpp"

#include "qgms/error.hpp"

#include <cmath>
#include <string>

namespace qgms {

bool AdmissibleRegion::contains(const StructuralCoefficient& c) const {
    for (Component k : kAllComponents) {
        if (!(*this)[k].contains(c[k])) return false;
    }
    return true;
}

void AdmissibleRegion::validate() const {
    for (Component k : kAllComponents) {
        const Interval& iv = (*this)[k];
        if (!(iv.lo <= iv.hi) || iv.lo < component_lower_bound(k) || iv.hi > component_upper_bound(k)) {
            throw Error(ErrorCode::InvalidConfig, "region interval for " + std::string(to_string(k)) +
                                                      " must lie inside the component range");
        }
    }
}

AdmissibleRegion AdmissibleRegion::full_space() {
    AdmissibleRegion r;
    for (Component k : kAllComponents) r[k] = {component_lower_bound(k), component_upper_bound(k)};
    return r;
}

void RoleRegionTable::validate() const {
    for (const auto& region : regions) region.validate();
}

RoleRegionTable RoleRegionTable::defaults() {
    RoleRegionTable t;
    t[StructuralRole::Impulsive].bounds = {Interval{0.1, 1.0}, Interval{0.0, 2.0}, Interval{0.2, 1.0},
                                           Interval{0.0, 1.0}};
    t[StructuralRole::Corrective].bounds = {Interval{0.0, 0.9}, Interval{0.0, 4.0}, Interval{0.0, 1.0},
                                            Interval{0.0, 1.0}};
    t[StructuralRole::Consolidative].bounds = {Interval{0.0, 0.7}, Interval{0.0, 4.0}, Interval{0.0, 1.0},
                                               Interval{0.0, 1.0}};
    return t;
}

AdmissibleRegion admissible_region(StructuralRole parent_role, const RoleRegionTable& table) {
    return table[parent_role];
}

Saturation saturation(const StructuralCoefficient& c, const AdmissibleRegion& region) {
    Saturation best;
    bool scored = false;
    for (Component k : kAllComponents) {
        const double hw = region.halfwidth(k);
        if (!(hw > 0.0)) continue;
        const double g = std::abs(c[k] - region.center(k)) / hw;
        if (!scored || g > best.score) {
            best = {g, k};
            scored = true;
        }
    }
    if (!scored) throw Error(ErrorCode::DegenerateRegion, "region has zero halfwidth on every component");
    return best;
}

double saturation_score(const StructuralCoefficient& c, const AdmissibleRegion& region) {
    return saturation(c, region).score;
}

Decimal HierarchyConfig::rho_at(std::size_t level) const {
    Decimal rho = rho0;
    for (std::size_t i = 0; i < level; ++i) rho = rho * gamma;
    return rho;
}

void HierarchyConfig::validate() const {
    if (levels < 1) throw Error(ErrorCode::InvalidConfig, "levels must be >= 1");
    if (gamma <= Decimal(1)) throw Error(ErrorCode::InvalidConfig, "gamma must be > 1");
    if (rho0.sign() <= 0) throw Error(ErrorCode::InvalidConfig, "rho0 must be > 0");
    const Decimal top = rho_at(levels - 1);
    if (top >= Decimal(1)) {
        throw Error(ErrorCode::InvalidConfig, "coarsest threshold rho0*gamma^(levels-1) = " + top.to_string() +
                                                  " must stay below 1");
    }
    if (min_bars < 1) throw Error(ErrorCode::InvalidConfig, "min_bars must be >= 1");
    table.validate();
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(std::span<const Decimal> closes, const HierarchyConfig& config) : closes_(closes), config_(config) {
        for (std::size_t level = 0; level < config.levels; ++level) {
            SegmentationConfig sc;
            sc.rho = config.rho_at(level);
            sc.min_bars = config.min_bars;
            rungs_.push_back(sc);
        }
    }

    std::vector<StructureNode> roots() {
        const std::size_t top = config_.levels - 1;
        return nodes_for(segment_closes(closes_, rungs_[top]), top);
    }

private:
    std::vector<StructureNode> nodes_for(const std::vector<Segment>& segments, std::size_t level) {
        std::vector<StructureNode> out;
        out.reserve(segments.size());
        for (const Segment& seg : segments) {
            StructureNode node;
            node.segment = seg;
            node.coefficient = encode_closes(seg, closes_);
            node.role = classify_role(node.coefficient, config_.thresholds);
            node.level = level;
            if (level > 0) expand(node);
            out.push_back(std::move(node));
        }
        return out;
    }

    void expand(StructureNode& node) {
        const Segment& seg = node.segment;
        const auto span = closes_.subspan(seg.start_index, seg.bar_count());
        std::vector<Segment> finer = segment_closes(span, rungs_[node.level - 1], seg.start_index);
        if (finer.size() == 1 && finer.front() == seg) return;
        node.children = nodes_for(finer, node.level - 1);
    }

    std::span<const Decimal> closes_;
    const HierarchyConfig& config_;
    std::vector<SegmentationConfig> rungs_;
};

void collect_violations(const StructureNode& node, const RoleRegionTable& table, NodePath& path,
                        std::vector<Violation>& out) {
    const AdmissibleRegion& region = table[node.role];
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const StructureNode& child = node.children[i];
        path.push_back(i);
        const Saturation s = saturation(child.coefficient, region);
        if (s.score > 1.0) out.push_back(Violation{path, s.component, s.score});
        collect_violations(child, table, path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<StructureNode> build_tree(const PriceSeries& series, const HierarchyConfig& config) {
    config.validate();
    require_non_empty(series);
    const std::vector<Decimal> closes = series.closes();
    return TreeBuilder(closes, config).roots();
}

std::vector<Violation> check_admissibility(const StructureNode& root, const RoleRegionTable& table,
                                           const NodePath& root_path) {
    std::vector<Violation> out;
    NodePath path = root_path;
    collect_violations(root, table, path, out);
    return out;
}

std::vector<Violation> check_admissibility(std::span<const StructureNode> roots, const RoleRegionTable& table) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto part = check_admissibility(roots[i], table, NodePath{i});
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

const AdmissibleRegion& scoring_region(const StructureNode& node, const StructureNode* parent,
                                       const RoleRegionTable& table) {
    return parent ? table[parent->role] : table[node.role];
}

}  // namespace qgms
