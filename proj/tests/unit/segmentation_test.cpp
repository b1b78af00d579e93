#include "qgms/error.hpp"
#include "qgms/segmentation.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace qgms {
namespace {

std::vector<Segment> segs(const std::vector<long long>& closes, const char* rho = "0.382", std::size_t min_bars = 2) {
    SegmentationConfig config;
    config.rho = Decimal::parse(rho);
    config.min_bars = min_bars;
    return segment_series(test::series_from_ticks(closes, 0), config);
}

std::vector<oracle::Leg> legs_of(const std::vector<Segment>& s) {
    std::vector<oracle::Leg> out;
    for (const auto& seg : s) {
        const int d = seg.direction == Direction::Up ? 1 : (seg.direction == Direction::Down ? -1 : 0);
        out.push_back({seg.start_index, seg.end_index, d});
    }
    return out;
}

TEST(Segmentation, StrictlyIncreasingIsOneUpSegment) {
    const auto s = segs({1, 2, 3, 5, 8, 13});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].start_index, 0u);
    EXPECT_EQ(s[0].end_index, 5u);
    EXPECT_EQ(s[0].direction, Direction::Up);
    EXPECT_EQ(s[0].start_price, Decimal(1));
    EXPECT_EQ(s[0].end_price, Decimal(13));
}

TEST(Segmentation, ConstantIsOneFlatSegment) {
    const auto s = segs({7, 7, 7, 7});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].direction, Direction::Flat);
    EXPECT_EQ(s[0].end_index, 3u);
}

TEST(Segmentation, WorkedZigzagExample) {
    const auto s = segs({100, 110, 105, 115});
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(legs_of(s), (std::vector<oracle::Leg>{{0, 1, 1}, {1, 2, -1}, {2, 3, 1}}));
}

TEST(Segmentation, SingleBarIsDegenerateFlat) {
    const auto s = segs({42});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].start_index, 0u);
    EXPECT_EQ(s[0].end_index, 0u);
    EXPECT_EQ(s[0].direction, Direction::Flat);
}

TEST(Segmentation, ThresholdIsInclusive) {
    // Counter-move of exactly rho * amplitude confirms: 0.5 * 10 = 5.
    EXPECT_EQ(segs({100, 110, 105}, "0.5").size(), 2u);
    EXPECT_EQ(segs({100, 110, 106}, "0.5").size(), 1u);
}

TEST(Segmentation, TiesGoToEarliestExtremum) {
    const auto s = segs({100, 110, 110, 104});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].end_index, 1u);
    EXPECT_EQ(s[1].start_index, 1u);
}

TEST(Segmentation, BootstrapTracksBothDirections) {
    // First swing is down; the up side never builds amplitude.
    EXPECT_EQ(legs_of(segs({100, 90, 80, 95})), (std::vector<oracle::Leg>{{0, 2, -1}, {2, 3, 1}}));
}

TEST(Segmentation, MinBarsSuppressesShortSwings) {
    // One-step swing 100 -> 110 is too short for min_bars = 3.
    EXPECT_EQ(legs_of(segs({100, 110, 100, 90}, "0.382", 2)), (std::vector<oracle::Leg>{{0, 1, 1}, {1, 3, -1}}));
    EXPECT_EQ(legs_of(segs({100, 110, 100, 90}, "0.382", 3)), (std::vector<oracle::Leg>{{0, 3, -1}}));
}

TEST(Segmentation, SmallRhoFollowsEveryWiggle) {
    EXPECT_EQ(legs_of(segs({100, 110, 108, 120}, "0.1")),
              (std::vector<oracle::Leg>{{0, 1, 1}, {1, 2, -1}, {2, 3, 1}}));
    EXPECT_EQ(legs_of(segs({100, 110, 108, 120}, "0.382")), (std::vector<oracle::Leg>{{0, 3, 1}}));
}

TEST(Segmentation, EmptySeriesAndBadConfig) {
    EXPECT_THROW(segment_series(PriceSeries(), SegmentationConfig{}), Error);
    SegmentationConfig bad;
    bad.rho = Decimal(1);
    EXPECT_THROW(bad.validate(), Error);
    bad.rho = Decimal(0);
    EXPECT_THROW(bad.validate(), Error);
    bad = SegmentationConfig{};
    bad.min_bars = 0;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(Segmentation, OffsetShiftsIndices) {
    const std::vector<Decimal> closes{Decimal(100), Decimal(110), Decimal(105), Decimal(115)};
    const auto s = segment_closes(closes, SegmentationConfig{}, 7);
    EXPECT_EQ(s.front().start_index, 7u);
    EXPECT_EQ(s.back().end_index, 10u);
}

TEST(SegmentationProperty, MatchesOracleTilesAndIsDeterministic) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> len(1, 80);
    std::uniform_int_distribution<std::size_t> mb(1, 4);
    std::uniform_int_distribution<int> rho_pick(0, 3);
    const std::pair<const char*, std::pair<long long, long long>> rhos[] = {
        {"0.382", {382, 1000}}, {"0.6112", {6112, 10000}}, {"0.1", {1, 10}}, {"0.9", {9, 10}}};
    for (int iter = 0; iter < 500; ++iter) {
        const auto closes = test::random_walk(rng, len(rng), 500, 6);
        const auto& [rho_text, frac] = rhos[rho_pick(rng)];
        const std::size_t min_bars = mb(rng);
        const auto s = segs(closes, rho_text, min_bars);
        ASSERT_EQ(legs_of(s), oracle::zigzag(closes, frac.first, frac.second, min_bars));
        ASSERT_EQ(s, segs(closes, rho_text, min_bars));
        ASSERT_EQ(s.front().start_index, 0u);
        ASSERT_EQ(s.back().end_index, closes.size() - 1);
        for (std::size_t k = 1; k < s.size(); ++k) ASSERT_EQ(s[k].start_index, s[k - 1].end_index);
        for (const auto& seg : s) {
            ASSERT_EQ(seg.direction, direction_between(seg.start_price, seg.end_price));
            if (closes.size() > 1) ASSERT_LT(seg.start_index, seg.end_index);
        }
    }
}

TEST(SegmentationProperty, AffineInvariant) {
    std::mt19937_64 rng(99);
    int shifted_down = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const PriceSeries s = test::random_ohlc(rng, 60, 2, 1200000);
        const auto base = segment_series(s, SegmentationConfig{});
        for (const char* a : {"0.001", "1", "1000", "3.7"}) {
            for (const char* b : {"-1", "0", "10000"}) {
                if (!test::affine_keeps_positive(s, Decimal::parse(a), Decimal::parse(b))) continue;
                if (b[0] == '-') ++shifted_down;
                const PriceSeries t = affine_transform(s, Decimal::parse(a), Decimal::parse(b));
                const auto other = segment_series(t, SegmentationConfig{});
                ASSERT_EQ(other.size(), base.size());
                for (std::size_t k = 0; k < base.size(); ++k) {
                    ASSERT_EQ(other[k].start_index, base[k].start_index);
                    ASSERT_EQ(other[k].end_index, base[k].end_index);
                    ASSERT_EQ(other[k].direction, base[k].direction);
                }
            }
        }
    }
    EXPECT_EQ(shifted_down, 800);
}

}  // namespace
}  // namespace qgms
