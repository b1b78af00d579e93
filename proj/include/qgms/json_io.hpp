#pragma once

#include "qgms/blind_harness.hpp"
#include "qgms/detector.hpp"
#include "qgms/encoding.hpp"
#include "qgms/hierarchy.hpp"
#include "qgms/metrics.hpp"

#include <nlohmann/json.hpp>

#include <span>

namespace qgms {

nlohmann::json to_json(const StructuralCoefficient& c);
nlohmann::json to_json(const Segment& s);
nlohmann::json to_json(const AdmissibleRegion& r);
nlohmann::json to_json(const TerminalZone& z);
nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const MetricsReport& r);
nlohmann::json to_json(const AnonymizedBar& b);

/// Nested tree: span, direction, coefficient, role, level and the node's
/// saturation against its scoring region. Prices are left out so the output
/// of a series and of any affine image of it are byte-identical.
nlohmann::json tree_to_json(std::span<const StructureNode> roots, const RoleRegionTable& table);

}  // namespace qgms
