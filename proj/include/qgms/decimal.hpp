#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace qgms {

/// Exact base-10 number: units * 10^-scale, with scale >= 0.
///
/// Prices and affine parameters live in this type so that a*p + b and every
/// price difference is computed without rounding. Structural ratios are then
/// formed from exact operands (see `exact_ratio`), which is what makes the
/// analysis pipeline bit-for-bit invariant under positive affine price maps.
class Decimal {
public:
    using Int = boost::multiprecision::cpp_int;

    Decimal() = default;
    Decimal(long long value) : units_(value) {}  // NOLINT(google-explicit-constructor)

    /// Parses `[+-]digits[.digits]` with an optional `e[+-]digits` exponent.
    /// Throws std::invalid_argument on anything else.
    static Decimal parse(std::string_view text);

    /// Exact value of the shortest decimal string that round-trips to `value`.
    static Decimal from_double(double value);

    std::string to_string() const;
    /// Correctly rounded (round-half-even) conversion.
    double to_double() const;

    int sign() const { return units_.sign(); }
    Decimal abs() const;

    Decimal operator-() const;
    friend Decimal operator+(const Decimal& lhs, const Decimal& rhs);
    friend Decimal operator-(const Decimal& lhs, const Decimal& rhs);
    friend Decimal operator*(const Decimal& lhs, const Decimal& rhs);

    friend bool operator==(const Decimal& lhs, const Decimal& rhs);
    friend std::strong_ordering operator<=>(const Decimal& lhs, const Decimal& rhs);

    const Int& units() const { return units_; }
    unsigned scale() const { return scale_; }

private:
    Decimal(Int units, unsigned scale);
    void normalize();

    Int units_{0};
    unsigned scale_ = 0;
};

/// num / den, correctly rounded to double. The result depends only on the
/// exact rational value, so exact_ratio(k*x, k*y) == exact_ratio(x, y)
/// bitwise for any k != 0.
/// Throws std::domain_error when den is zero.
double exact_ratio(const Decimal& num, const Decimal& den);

}  // namespace qgms
