#pragma once

#include "qgms/defaults.hpp"

#include "qgms/market_data.hpp"
#include "qgms/segmentation.hpp"

#include <array>
#include <span>
#include <string_view>

namespace qgms {

enum class Component { Efficiency = 0, Retracement = 1, Balance = 2, Skew = 3 };
inline constexpr std::size_t kComponentCount = 4;
inline constexpr std::array<Component, kComponentCount> kAllComponents{
    Component::Efficiency, Component::Retracement, Component::Balance, Component::Skew};
std::string_view to_string(Component c);

/// Upper bound of the retracement component.
inline constexpr double kRetracementCap = 10.0;

/// Scale-invariant signature of one segment, built from close prices only.
/// Every component is a ratio of price differences (or of bar counts), so a
/// positive affine map of prices leaves it bit-for-bit unchanged.
///
///   efficiency   |net displacement| / path length, in [0, 1]
///   retracement  largest internal counter-excursion / |net|, in [0, cap]
///   balance      share of steps moving with the segment (flat steps 0.5)
///   skew         relative bar position of the in-direction extreme
///
/// Degenerate segments set `degenerate`: zero path gives (0, 0, 0.5, 0);
/// zero net with non-zero path gives (0, cap, 0.5, 0).
struct StructuralCoefficient {
    double efficiency = 0.0;
    double retracement = 0.0;
    double balance = 0.5;
    double skew = 0.0;
    bool degenerate = false;

    double operator[](Component c) const;
    friend bool operator==(const StructuralCoefficient&, const StructuralCoefficient&) = default;
};

/// Global range of each component.
double component_lower_bound(Component c);
double component_upper_bound(Component c);

StructuralCoefficient encode(const Segment& segment, const PriceSeries& series);
/// Throws Error(IndexOutOfRange) when the segment does not fit in `closes`.
StructuralCoefficient encode_closes(const Segment& segment, std::span<const Decimal> closes);

enum class StructuralRole { Impulsive, Corrective, Consolidative };
inline constexpr std::array<StructuralRole, 3> kAllRoles{StructuralRole::Impulsive, StructuralRole::Corrective,
                                                         StructuralRole::Consolidative};
std::string_view to_string(StructuralRole role);

/// Invented defaults; exposed so runs can pin or vary them.
struct RoleThresholds {
    double impulsive_efficiency = defaults::kImpulsiveEfficiency;
    double impulsive_retracement = defaults::kImpulsiveRetracement;
    double consolidative_efficiency = defaults::kConsolidativeEfficiency;
};

/// Impulsive iff efficiency >= impulsive_efficiency and retracement <=
/// impulsive_retracement; else Consolidative iff efficiency <=
/// consolidative_efficiency; else Corrective.
StructuralRole classify_role(const StructuralCoefficient& c, const RoleThresholds& thresholds = {});

}  // namespace qgms
