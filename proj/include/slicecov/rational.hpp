#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slicecov {

/// Exact non-negative rational. All cohesion ratios are kept exact and only
/// rounded at the presentation boundary.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        normalize();
    }
    static Rational integer(std::int64_t n) { return Rational(n, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// "8/9"; integers print without the denominator ("1", "0").
    std::string to_rational_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Decimal rounded half-up, fixed number of places ("0.89", "0.27").
    std::string to_decimal_string(int places = 2) const {
        std::int64_t scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        bool negative = num_ < 0;
        std::int64_t n = negative ? -num_ : num_;
        std::int64_t scaled = (n * scale * 2 + den_) / (2 * den_); // half-up
        std::string digits = std::to_string(scaled % scale);
        digits.insert(0, static_cast<std::size_t>(places) - digits.size(), '0');
        std::string out = std::to_string(scaled / scale);
        if (places > 0) out += "." + digits;
        return negative && scaled != 0 ? "-" + out : out;
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    void normalize() {
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace slicecov
