#include "qgms/decimal.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace qgms {
namespace {

using Int = Decimal::Int;

const Int& pow10(unsigned n) {
    static const std::vector<Int> table = [] {
        std::vector<Int> t(64);
        t[0] = 1;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 10;
        return t;
    }();
    if (n < table.size()) return table[n];
    thread_local Int big;
    big = table.back();
    for (unsigned i = static_cast<unsigned>(table.size()) - 1; i < n; ++i) big *= 10;
    return big;
}

// Brings both operands to the larger of the two scales.
std::pair<Int, Int> aligned(const Decimal& a, const Decimal& b, unsigned& scale) {
    scale = std::max(a.scale(), b.scale());
    return {a.units() * pow10(scale - a.scale()), b.units() * pow10(scale - b.scale())};
}

unsigned bit_length(const Int& v) {
    return v == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1u;
}

// Correctly rounded n / d for n >= 0, d > 0.
double divide_to_double(Int n, Int d) {
    if (n == 0) return 0.0;
    const int k = static_cast<int>(bit_length(n)) - static_cast<int>(bit_length(d));
    // Quotient gets 55 or 56 significant bits: 53 kept, the rest for rounding.
    const int shift = 55 - k;
    if (shift >= 0) {
        n <<= shift;
    } else {
        d <<= -shift;
    }
    Int q;
    Int r;
    boost::multiprecision::divide_qr(n, d, q, r);
    const int extra = static_cast<int>(bit_length(q)) - 53;
    Int mantissa = q >> extra;
    const Int dropped = q - (mantissa << extra);
    const Int half = Int(1) << (extra - 1);
    const bool sticky = r != 0;
    if (dropped > half || (dropped == half && (sticky || (mantissa & 1) != 0))) {
        mantissa += 1;
    }
    return std::ldexp(mantissa.convert_to<double>(), extra - shift);
}

}  // namespace

Decimal::Decimal(Int units, unsigned scale) : units_(std::move(units)), scale_(scale) {
    normalize();
}

void Decimal::normalize() {
    if (units_ == 0) {
        scale_ = 0;
        return;
    }
    while (scale_ > 0) {
        Int q;
        Int r;
        boost::multiprecision::divide_qr(units_, Int(10), q, r);
        if (r != 0) break;
        units_ = std::move(q);
        --scale_;
    }
}

Decimal Decimal::parse(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    unsigned frac_digits = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            if (seen_point) ++frac_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty()) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        const char* begin = text.data() + pos;
        const char* end = text.data() + text.size();
        if (begin != end && *begin == '+') ++begin;
        auto [ptr, ec] = std::from_chars(begin, end, exponent);
        if (ec != std::errc{} || ptr == begin) {
            throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
        }
        pos = static_cast<std::size_t>(ptr - text.data());
    }
    if (pos != text.size()) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    if (exponent > 4096 || exponent < -4096) throw std::invalid_argument("exponent out of range");

    // cpp_int reads a leading 0 as an octal prefix.
    const std::size_t first = digits.find_first_not_of('0');
    Int units(first == std::string::npos ? std::string("0") : digits.substr(first));
    long scale = static_cast<long>(frac_digits) - exponent;
    if (scale < 0) {
        units *= pow10(static_cast<unsigned>(-scale));
        scale = 0;
    }
    if (negative) units = -units;
    return Decimal(std::move(units), static_cast<unsigned>(scale));
}

Decimal Decimal::from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::invalid_argument("cannot format double");
    return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string Decimal::to_string() const {
    std::string digits = (units_ < 0 ? Int(-units_) : units_).str();
    if (scale_ > 0) {
        if (digits.size() <= scale_) digits.insert(0, scale_ - digits.size() + 1, '0');
        digits.insert(digits.size() - scale_, 1, '.');
    }
    if (units_ < 0) digits.insert(0, 1, '-');
    return digits;
}

double Decimal::to_double() const {
    const std::string s = to_string();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc::result_out_of_range) return std::strtod(s.c_str(), nullptr);
    return out;
}

Decimal Decimal::abs() const { return units_ < 0 ? -*this : *this; }

Decimal Decimal::operator-() const { return Decimal(Int(-units_), scale_); }

Decimal operator+(const Decimal& lhs, const Decimal& rhs) {
    unsigned scale = 0;
    auto [a, b] = aligned(lhs, rhs, scale);
    return Decimal(a + b, scale);
}

Decimal operator-(const Decimal& lhs, const Decimal& rhs) {
    unsigned scale = 0;
    auto [a, b] = aligned(lhs, rhs, scale);
    return Decimal(a - b, scale);
}

Decimal operator*(const Decimal& lhs, const Decimal& rhs) {
    return Decimal(lhs.units_ * rhs.units_, lhs.scale_ + rhs.scale_);
}

bool operator==(const Decimal& lhs, const Decimal& rhs) {
    // Normalized representation is unique.
    return lhs.scale_ == rhs.scale_ && lhs.units_ == rhs.units_;
}

std::strong_ordering operator<=>(const Decimal& lhs, const Decimal& rhs) {
    unsigned scale = 0;
    auto [a, b] = aligned(lhs, rhs, scale);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double exact_ratio(const Decimal& num, const Decimal& den) {
    if (den.sign() == 0) throw std::domain_error("exact_ratio: zero denominator");
    unsigned scale = 0;
    auto [n, d] = aligned(num, den, scale);
    const bool negative = (n < 0) != (d < 0);
    if (n < 0) n = -n;
    if (d < 0) d = -d;
    const double q = divide_to_double(std::move(n), std::move(d));
    return negative ? -q : q;
}

}  // namespace qgms
