#pragma once

#include <cstddef>
#include <string_view>

/// Analytical defaults, in one place. Every config struct and every CLI flag
/// takes its default from here; the acceptance suite pins these values.
namespace qgms::defaults {

// Segmentation / hierarchy. Decimal-valued thresholds are kept as strings so
// they stay exact.
inline constexpr std::string_view kRho = "0.382";  // finest-scale reversal fraction
inline constexpr std::string_view kGamma = "1.6";  // rho growth per level
inline constexpr std::size_t kLevels = 3;
inline constexpr std::size_t kMinBars = 2;

// Role classification.
inline constexpr double kImpulsiveEfficiency = 0.6;
inline constexpr double kImpulsiveRetracement = 0.5;
inline constexpr double kConsolidativeEfficiency = 0.2;

// Terminal-zone gate: parent gauge >= 1 - epsilon, last child >= 1 - delta.
inline constexpr double kEpsilon = 0.15;
inline constexpr double kDelta = 0.15;

// Evaluation.
inline constexpr std::size_t kHorizonBars = 50;
inline constexpr std::size_t kAtrWindow = 14;
inline constexpr double kHitMultiplier = 2.0;

// Service.
inline constexpr int kPort = 8080;
inline constexpr std::string_view kHost = "127.0.0.1";
inline constexpr std::string_view kDataDir = "qgms-data";

}  // namespace qgms::defaults
