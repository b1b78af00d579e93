#include "qgms/json_io.hpp"

namespace qgms {

nlohmann::json to_json(const StructuralCoefficient& c) {
    return {{"efficiency", c.efficiency},
            {"retracement", c.retracement},
            {"balance", c.balance},
            {"skew", c.skew},
            {"degenerate", c.degenerate}};
}

nlohmann::json to_json(const Segment& s) {
    return {{"start_index", s.start_index}, {"end_index", s.end_index}, {"direction", to_string(s.direction)}};
}

nlohmann::json to_json(const AdmissibleRegion& r) {
    nlohmann::json j = nlohmann::json::object();
    for (Component k : kAllComponents) j[std::string(to_string(k))] = {r[k].lo, r[k].hi};
    return j;
}

nlohmann::json to_json(const TerminalZone& z) {
    return {{"bar_index", z.bar_index},
            {"expected_direction", to_string(z.expected_direction)},
            {"parent_path", z.parent_path},
            {"parent_saturation", z.parent_saturation},
            {"child_saturation", z.child_saturation}};
}

nlohmann::json to_json(const Violation& v) {
    return {{"path", v.path}, {"component", to_string(v.component)}, {"score", v.score}};
}

nlohmann::json to_json(const MetricsReport& r) {
    nlohmann::json records = nlohmann::json::array();
    for (const PredictionRecord& p : r.records) {
        records.push_back({{"bar_index", p.bar_index},
                           {"direction", to_string(p.direction)},
                           {"mfe", p.mfe},
                           {"mae", p.mae},
                           {"rr", p.rr ? nlohmann::json(*p.rr) : nlohmann::json(nullptr)},
                           {"no_adverse", p.no_adverse},
                           {"hit", p.hit},
                           {"truncated", p.truncated},
                           {"atr", p.atr}});
    }
    return {{"records", records},
            {"hit_rate", r.hit_rate ? nlohmann::json(*r.hit_rate) : nlohmann::json(nullptr)},
            {"mean_rr", r.mean_rr ? nlohmann::json(*r.mean_rr) : nlohmann::json(nullptr)},
            {"max_drawdown_over_series", r.max_drawdown_over_series}};
}

nlohmann::json to_json(const AnonymizedBar& b) {
    return {{"index", b.index},
            {"open", b.open.to_double()},
            {"high", b.high.to_double()},
            {"low", b.low.to_double()},
            {"close", b.close.to_double()}};
}

namespace {

nlohmann::json node_to_json(const StructureNode& node, const StructureNode* parent, const RoleRegionTable& table) {
    nlohmann::json j = to_json(node.segment);
    j["level"] = node.level;
    j["role"] = to_string(node.role);
    j["coefficient"] = to_json(node.coefficient);
    j["saturation"] = saturation_score(node.coefficient, scoring_region(node, parent, table));
    nlohmann::json children = nlohmann::json::array();
    for (const StructureNode& child : node.children) children.push_back(node_to_json(child, &node, table));
    j["children"] = std::move(children);
    return j;
}

}  // namespace

nlohmann::json tree_to_json(std::span<const StructureNode> roots, const RoleRegionTable& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const StructureNode& root : roots) out.push_back(node_to_json(root, nullptr, table));
    return out;
}

}  // namespace qgms
