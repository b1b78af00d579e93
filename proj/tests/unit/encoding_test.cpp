#include "qgms/encoding.hpp"
#include "qgms/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace qgms {
namespace {

StructuralCoefficient encode_ticks(const std::vector<long long>& closes) {
    const PriceSeries s = test::series_from_ticks(closes, 0);
    const Segment whole{0, closes.size() - 1, direction_between(s[0].close, s.bars().back().close), s[0].close,
                        s.bars().back().close};
    return encode(whole, s);
}

TEST(Encode, StrictlyMonotone) {
    const auto c = encode_ticks({1, 2, 3, 4});
    EXPECT_EQ(c.efficiency, 1.0);
    EXPECT_EQ(c.retracement, 0.0);
    EXPECT_EQ(c.balance, 1.0);
    EXPECT_EQ(c.skew, 1.0);
    EXPECT_FALSE(c.degenerate);
}

TEST(Encode, WorkedExample) {
    const auto c = encode_ticks({100, 110, 105, 115});
    EXPECT_EQ(c.efficiency, 0.6);
    EXPECT_EQ(c.retracement, 1.0 / 3.0);
    EXPECT_EQ(c.balance, 2.0 / 3.0);
    EXPECT_EQ(c.skew, 1.0);
}

TEST(Encode, DownSegmentMirrorsUp) {
    const auto c = encode_ticks({115, 105, 110, 100});
    EXPECT_EQ(c.efficiency, 0.6);
    EXPECT_EQ(c.retracement, 1.0 / 3.0);
    EXPECT_EQ(c.balance, 2.0 / 3.0);
    EXPECT_EQ(c.skew, 1.0);
}

TEST(Encode, SkewFindsEarliestInDirectionExtreme) {
    // Up 100 -> 105 with the high (120) at index 1 of 4 steps.
    const auto c = encode_ticks({100, 120, 110, 120, 105});
    EXPECT_EQ(c.skew, 0.25);
    EXPECT_EQ(c.retracement, 3.0);  // 120 -> 105 = 15 against net 5
}

TEST(Encode, FlatStepsCountHalf) {
    const auto c = encode_ticks({100, 100, 101});
    EXPECT_EQ(c.balance, 0.75);
}

TEST(Encode, DegenerateConventions) {
    const auto flat = encode_ticks({5, 5, 5});
    EXPECT_TRUE(flat.degenerate);
    EXPECT_EQ(flat.efficiency, 0.0);
    EXPECT_EQ(flat.retracement, 0.0);
    EXPECT_EQ(flat.balance, 0.5);
    EXPECT_EQ(flat.skew, 0.0);

    const auto round_trip = encode_ticks({5, 9, 5});
    EXPECT_TRUE(round_trip.degenerate);
    EXPECT_EQ(round_trip.efficiency, 0.0);
    EXPECT_EQ(round_trip.retracement, kRetracementCap);
    EXPECT_EQ(round_trip.balance, 0.5);
    EXPECT_EQ(round_trip.skew, 0.0);

    const auto single = encode_ticks({5});
    EXPECT_TRUE(single.degenerate);
}

TEST(Encode, RetracementIsCapped) {
    const auto c = encode_ticks({100, 200, 101});  // excursion 99 over net 1
    EXPECT_EQ(c.retracement, kRetracementCap);
    const auto just_under = encode_ticks({100, 200, 110});  // 90 / 10 = 9
    EXPECT_EQ(just_under.retracement, 9.0);
}

TEST(Encode, IndexOutOfRange) {
    const PriceSeries s = test::series_from_ticks({1, 2, 3}, 0);
    EXPECT_THROW(encode(Segment{0, 3, Direction::Up, Decimal(1), Decimal(4)}, s), Error);
    EXPECT_THROW(encode(Segment{2, 1, Direction::Up, Decimal(1), Decimal(4)}, s), Error);
}

TEST(EncodeProperty, RangesAndDeterminism) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> len(1, 60);
    for (int iter = 0; iter < 2000; ++iter) {
        const auto closes = test::random_walk(rng, len(rng), 500, 8);
        const auto c = encode_ticks(closes);
        EXPECT_EQ(c, encode_ticks(closes));
        for (Component k : kAllComponents) {
            EXPECT_GE(c[k], component_lower_bound(k));
            EXPECT_LE(c[k], component_upper_bound(k));
        }
    }
}

TEST(EncodeProperty, AffineInvariantBitwise) {
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 200; ++iter) {
        const PriceSeries s = test::random_ohlc(rng, 40);
        const PriceSeries t = affine_transform(s, 3.7, 12.0);
        std::uniform_int_distribution<std::size_t> idx(0, s.size() - 1);
        std::size_t a = idx(rng), b = idx(rng);
        if (a > b) std::swap(a, b);
        const Segment seg{a, b, direction_between(s[a].close, s[b].close), s[a].close, s[b].close};
        const auto c1 = encode(seg, s);
        const auto c2 = encode(seg, t);
        EXPECT_EQ(std::memcmp(&c1, &c2, offsetof(StructuralCoefficient, degenerate)), 0);
        EXPECT_EQ(c1, c2);
    }
}

TEST(ClassifyRole, Defaults) {
    StructuralCoefficient c;
    c.efficiency = 1.0;
    c.retracement = 0.0;
    EXPECT_EQ(classify_role(c), StructuralRole::Impulsive);
    c.efficiency = 0.1;
    EXPECT_EQ(classify_role(c), StructuralRole::Consolidative);
    c.efficiency = 0.4;
    c.retracement = 0.8;
    EXPECT_EQ(classify_role(c), StructuralRole::Corrective);
    // Boundaries are inclusive.
    c.efficiency = 0.6;
    c.retracement = 0.5;
    EXPECT_EQ(classify_role(c), StructuralRole::Impulsive);
    c.efficiency = 0.2;
    EXPECT_EQ(classify_role(c), StructuralRole::Consolidative);
    // High efficiency with deep retracement is not impulsive.
    c.efficiency = 0.9;
    c.retracement = 0.6;
    EXPECT_EQ(classify_role(c), StructuralRole::Corrective);
}

TEST(ClassifyRole, ExactlyOneRoleUnderCustomThresholds) {
    RoleThresholds t{0.3, 0.2, 0.3};
    StructuralCoefficient c;
    c.efficiency = 0.3;
    c.retracement = 0.1;
    EXPECT_EQ(classify_role(c, t), StructuralRole::Impulsive);  // impulsive wins the overlap
}

}  // namespace
}  // namespace qgms
