#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <vector>

#include "spinent/errors.hpp"

namespace spinent {

using BigInt = boost::multiprecision::cpp_int;
// Always stored reduced with positive denominator (boost guarantees both).
using Rational = boost::multiprecision::cpp_rational;

// n! with a per-thread memo table; arguments stay in the low hundreds here.
inline const BigInt& factorial(int n) {
    if (n < 0) throw Error("factorial of negative argument");
    thread_local std::vector<BigInt> table{BigInt(1)};
    while (static_cast<int>(table.size()) <= n)
        table.push_back(table.back() * static_cast<int>(table.size()));
    return table[static_cast<size_t>(n)];
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return BigInt(0);
    return factorial(n) / (factorial(k) * factorial(n - k));
}

inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

/* Rational -> double that survives numerators and denominators far beyond
 * the double exponent range: shift to a ~64-bit integer quotient, convert,
 * then scale back with ldexp. Two roundings total. */
inline double to_double(const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    if (num == 0) return 0.0;
    BigInt den = boost::multiprecision::denominator(q);
    bool neg = num < 0;
    if (neg) num = -num;
    long nb = static_cast<long>(boost::multiprecision::msb(num));
    long db = static_cast<long>(boost::multiprecision::msb(den));
    long shift = nb - db - 64;
    if (shift > 0) den <<= shift;
    else num <<= -shift;
    double d = (num / den).convert_to<double>();
    d = std::ldexp(d, static_cast<int>(shift));
    return neg ? -d : d;
}

} // namespace spinent
