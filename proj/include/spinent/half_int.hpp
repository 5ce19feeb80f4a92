#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace spinent {

/* Angular momentum quantum numbers live on the half-integer lattice.
 * HalfInt stores twice the value, so J = 5/2 has twice() == 5 and all
 * arithmetic stays exact. Implicit construction from int gives the
 * integer points (HalfInt(2) == 2, not 2/2). */
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int whole) : t_(2 * whole) {}

    static constexpr HalfInt from_twice(int t) {
        HalfInt h;
        h.t_ = t;
        return h;
    }
    static constexpr HalfInt half() { return from_twice(1); }

    constexpr int twice() const { return t_; }
    constexpr double value() const { return t_ / 2.0; }
    constexpr bool is_integer() const { return (t_ & 1) == 0; }
    // true when the two values differ by an integer (same character)
    constexpr bool same_character(HalfInt o) const { return ((t_ ^ o.t_) & 1) == 0; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.t_ + b.t_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.t_ - b.t_); }
    constexpr HalfInt operator-() const { return from_twice(-t_); }
    constexpr HalfInt abs() const { return from_twice(t_ < 0 ? -t_ : t_); }

    constexpr bool operator==(const HalfInt&) const = default;
    constexpr auto operator<=>(const HalfInt&) const = default;

    // "2", "-1/2", ... (fractions always reduced, denominator 2)
    std::string str() const {
        if (is_integer()) return std::to_string(t_ / 2);
        return std::to_string(t_) + "/2";
    }

    /* Accepts "3", "-3", "5/2", "-5/2", "2.5", "2.0", and the like.
     * Parsing is exact: decimals other than .0/.5 are rejected rather
     * than rounded. */
    static std::optional<HalfInt> parse(std::string_view s) {
        if (s.empty()) return std::nullopt;
        bool neg = false;
        size_t i = 0;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        long whole = 0;
        size_t digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            whole = whole * 10 + (s[i] - '0');
            if (whole > 1000000) return std::nullopt;
            ++i;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
        long t;
        if (i == s.size()) {
            t = 2 * whole;
        } else if (s[i] == '/') {
            std::string_view den = s.substr(i + 1);
            if (den == "1") t = 2 * whole;
            else if (den == "2") t = whole;
            else return std::nullopt;
        } else if (s[i] == '.') {
            std::string_view frac = s.substr(i + 1);
            if (frac == "0") t = 2 * whole;
            else if (frac == "5") t = 2 * whole + 1;
            else return std::nullopt;
        } else {
            return std::nullopt;
        }
        return from_twice(static_cast<int>(neg ? -t : t));
    }

private:
    int t_ = 0;
};

inline HalfInt min(HalfInt a, HalfInt b) { return a < b ? a : b; }
inline HalfInt max(HalfInt a, HalfInt b) { return a < b ? b : a; }

} // namespace spinent
