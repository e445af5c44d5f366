#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace sdattn {

/// Exact rational over 64-bit integers, always in lowest terms with a
/// positive denominator. Every value the engines produce is a finite sum of
/// 1/M terms, so denominators stay small.
class rational {
public:
    constexpr rational() = default;
    constexpr rational(std::int64_t n) : num_(n) {} // NOLINT(google-explicit-constructor)
    rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0)
            throw error("rational with zero denominator");
        normalize();
    }

    constexpr std::int64_t numerator() const noexcept { return num_; }
    constexpr std::int64_t denominator() const noexcept { return den_; }

    rational& operator+=(const rational& o) {
        const std::int64_t g = std::gcd(den_, o.den_);
        num_ = num_ * (o.den_ / g) + o.num_ * (den_ / g);
        den_ = den_ / g * o.den_;
        normalize();
        return *this;
    }
    rational& operator-=(const rational& o) { return *this += -o; }
    rational& operator*=(const rational& o) {
        const std::int64_t g1 = std::gcd(num_, o.den_);
        const std::int64_t g2 = std::gcd(o.num_, den_);
        num_ = (g1 ? num_ / g1 : num_) * (g2 ? o.num_ / g2 : o.num_);
        den_ = (g2 ? den_ / g2 : den_) * (g1 ? o.den_ / g1 : o.den_);
        normalize();
        return *this;
    }
    rational& operator/=(const rational& o) {
        if (o.num_ == 0)
            throw error("division by zero");
        return *this *= rational(o.den_, o.num_);
    }

    friend rational operator-(const rational& a) {
        rational r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend rational operator+(rational a, const rational& b) { return a += b; }
    friend rational operator-(rational a, const rational& b) { return a -= b; }
    friend rational operator*(rational a, const rational& b) { return a *= b; }
    friend rational operator/(rational a, const rational& b) { return a /= b; }

    friend constexpr bool operator==(const rational&, const rational&) = default;
    friend std::strong_ordering operator<=>(const rational& a, const rational& b) {
        // Denominators are positive; operands stay far from overflow in this domain.
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using rational_vector = std::vector<rational>;

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const rational& r) {
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::ostream& operator<<(std::ostream& os, const rational& r) { return os << to_string(r); }

inline rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
            throw error("malformed rational '" + std::string(text) + "'");
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return rational(parse_int(text));
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw error("zero denominator in '" + std::string(text) + "'");
    return rational(parse_int(text.substr(0, slash)), den);
}

inline std::string to_string(const rational_vector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

} // namespace sdattn
