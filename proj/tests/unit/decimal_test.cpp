#include "qgms/decimal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace qgms {
namespace {

TEST(Decimal, ParsesPlainAndExponentForms) {
    EXPECT_EQ(Decimal::parse("1.2000").to_string(), "1.2");
    EXPECT_EQ(Decimal::parse("-0.0050").to_string(), "-0.005");
    EXPECT_EQ(Decimal::parse("+12").to_string(), "12");
    EXPECT_EQ(Decimal::parse("1.5e3").to_string(), "1500");
    EXPECT_EQ(Decimal::parse("25E-4").to_string(), "0.0025");
    EXPECT_EQ(Decimal::parse(".5").to_string(), "0.5");
    EXPECT_EQ(Decimal::parse("7.").to_string(), "7");
}

TEST(Decimal, LeadingZerosAreDecimalNotOctal) {
    EXPECT_EQ(Decimal::parse("0.382").to_string(), "0.382");
    EXPECT_EQ(Decimal::parse("0089").to_string(), "89");
    EXPECT_EQ(Decimal::parse("0.09"), Decimal::parse("9e-2"));
    EXPECT_EQ(Decimal::parse("000").sign(), 0);
}

TEST(Decimal, RejectsGarbage) {
    for (const char* bad : {"", "-", "abc", "1.2.3", "1e", "1e+", "0x10", "1,5", " 1", "1 ", "nan", "inf"}) {
        EXPECT_THROW(Decimal::parse(bad), std::invalid_argument) << bad;
    }
}

TEST(Decimal, EqualityIgnoresTrailingZeros) {
    EXPECT_EQ(Decimal::parse("1.50"), Decimal::parse("1.5"));
    EXPECT_EQ(Decimal::parse("-0.0"), Decimal(0));
    EXPECT_LT(Decimal::parse("1.4999"), Decimal::parse("1.5"));
    EXPECT_GT(Decimal::parse("-1.4999"), Decimal::parse("-1.5"));
}

TEST(Decimal, ArithmeticIsExact) {
    const Decimal a = Decimal::parse("0.1");
    const Decimal b = Decimal::parse("0.2");
    EXPECT_EQ(a + b, Decimal::parse("0.3"));
    EXPECT_EQ(Decimal::parse("1.2") - Decimal::parse("1.1990"), Decimal::parse("0.001"));
    EXPECT_EQ(Decimal(2) * Decimal::parse("1.5") + Decimal(10), Decimal(13));
    EXPECT_EQ(Decimal::parse("0.382") * Decimal::parse("1.6"), Decimal::parse("0.6112"));
    EXPECT_EQ((-Decimal::parse("2.5")).abs(), Decimal::parse("2.5"));
}

TEST(Decimal, FromDoubleUsesShortestRoundTrip) {
    EXPECT_EQ(Decimal::from_double(0.1).to_string(), "0.1");
    EXPECT_EQ(Decimal::from_double(1e-3).to_string(), "0.001");
    EXPECT_EQ(Decimal::from_double(-1e4).to_string(), "-10000");
    EXPECT_EQ(Decimal::from_double(3.7).to_double(), 3.7);
    EXPECT_THROW(Decimal::from_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(Decimal, ToDoubleIsCorrectlyRounded) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = dist(rng);
        EXPECT_EQ(Decimal::from_double(v).to_double(), v);
    }
    // Halfway between 1 and the next double rounds to even (1).
    EXPECT_EQ(Decimal::parse("1.00000000000000011102230246251565404236316680908203125").to_double(), 1.0);
}

TEST(ExactRatio, MatchesCorrectlyRoundedDivision) {
    EXPECT_EQ(exact_ratio(Decimal(1), Decimal(3)), 1.0 / 3.0);
    EXPECT_EQ(exact_ratio(Decimal(2), Decimal(3)), 2.0 / 3.0);
    EXPECT_EQ(exact_ratio(Decimal::parse("5"), Decimal::parse("15")), 1.0 / 3.0);
    EXPECT_EQ(exact_ratio(Decimal(-3), Decimal(4)), -0.75);
    EXPECT_EQ(exact_ratio(Decimal(0), Decimal(4)), 0.0);
    EXPECT_THROW(exact_ratio(Decimal(1), Decimal(0)), std::domain_error);
}

TEST(ExactRatio, DependsOnlyOnTheRationalValue) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> num(-1000000, 1000000);
    std::uniform_int_distribution<long long> den(1, 1000000);
    const Decimal k = Decimal::parse("0.001037");
    for (int i = 0; i < 2000; ++i) {
        const Decimal x(num(rng));
        const Decimal y(den(rng));
        EXPECT_EQ(exact_ratio(k * x, k * y), exact_ratio(x, y));
        // Integers below 2^53 divide exactly in IEEE arithmetic, correctly rounded.
        EXPECT_EQ(exact_ratio(x, y), static_cast<double>(x.units()) / static_cast<double>(y.units()));
    }
}

}  // namespace
}  // namespace qgms
