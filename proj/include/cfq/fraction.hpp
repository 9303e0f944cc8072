#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "cfq/errors.hpp"

namespace cfq {

/// Exact rational with 64-bit numerator and positive denominator, always in
/// lowest terms. Golden values are stored this way and converted to double
/// only at comparison time.
class Fraction {
public:
    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
    constexpr Fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw DomainError("fraction with zero denominator");
        reduce();
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }
    constexpr double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    explicit constexpr operator double() const { return value(); }

    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    /// Parses "p/q" or an integer. Anything else yields nullopt.
    static std::optional<Fraction> parse(std::string_view text) {
        auto parse_int = [](std::string_view s) -> std::optional<std::int64_t> {
            if (s.empty()) return std::nullopt;
            std::size_t i = 0;
            bool neg = false;
            if (s[0] == '-' || s[0] == '+') {
                neg = s[0] == '-';
                i = 1;
            }
            if (i == s.size()) return std::nullopt;
            std::int64_t v = 0;
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') return std::nullopt;
                v = v * 10 + (s[i] - '0');
                if (v > (std::int64_t{1} << 40)) return std::nullopt;
            }
            return neg ? -v : v;
        };
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            auto n = parse_int(text);
            if (!n) return std::nullopt;
            return Fraction(*n);
        }
        auto n = parse_int(text.substr(0, slash));
        auto d = parse_int(text.substr(slash + 1));
        if (!n || !d || *d == 0) return std::nullopt;
        return Fraction(*n, *d);
    }

    friend constexpr Fraction operator+(Fraction a, Fraction b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend constexpr Fraction operator-(Fraction a, Fraction b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend constexpr Fraction operator*(Fraction a, Fraction b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend constexpr Fraction operator/(Fraction a, Fraction b) {
        if (b.num_ == 0) throw DomainError("division by zero fraction");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    constexpr Fraction operator-() const { return {-num_, den_}; }

    friend constexpr bool operator==(Fraction a, Fraction b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend constexpr bool operator<(Fraction a, Fraction b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend constexpr bool operator<=(Fraction a, Fraction b) { return !(b < a); }

    friend std::ostream& operator<<(std::ostream& os, Fraction f) { return os << f.str(); }

private:
    constexpr void reduce() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline double to_double(double x) { return x; }
inline double to_double(Fraction f) { return f.value(); }

}  // namespace cfq
