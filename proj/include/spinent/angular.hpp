#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spinent/errors.hpp"
#include "spinent/half_int.hpp"
#include "spinent/rational.hpp"

namespace spinent {

// smallest total angular momentum a collection of spins-1/2 can carry
inline HalfInt j_floor(int spins) { return HalfInt::from_twice(spins & 1); }

inline bool valid_total_j(int spins, HalfInt j) {
    return j.twice() >= 0 && j.twice() <= spins && ((j.twice() ^ spins) & 1) == 0;
}

inline bool valid_m(HalfInt j, HalfInt m) {
    return m.abs() <= j && m.same_character(j);
}

inline void require_total_j(int spins, HalfInt j) {
    if (!valid_total_j(spins, j))
        throw InvalidJ("J = " + j.str() + " is not reachable with " + std::to_string(spins) +
                       " spins");
}

/* Number of permutation-degenerate copies of the spin-J multiplet in
 * N spins-1/2:  d^J_N = N! (2J+1) / ((N/2-J)! (N/2+J+1)!). */
inline BigInt degeneracy(HalfInt J, int N) {
    if (N < 1) throw InvalidJ("particle count must be positive");
    require_total_j(N, J);
    int a = (N - J.twice()) / 2;
    int b = (N + J.twice()) / 2 + 1;
    return factorial(N) * (J.twice() + 1) / (factorial(a) * factorial(b));
}

// All d^J_N for one ensemble size, indexed by J.
struct DegeneracyTable {
    int N = 0;
    HalfInt j_min;
    std::vector<BigInt> values; // values[i] belongs to J = j_min + i

    static DegeneracyTable build(int N) {
        if (N < 1) throw InvalidJ("particle count must be positive");
        DegeneracyTable t;
        t.N = N;
        t.j_min = j_floor(N);
        for (HalfInt J = t.j_min; J.twice() <= N; J = J + 1)
            t.values.push_back(degeneracy(J, N));
        return t;
    }

    const BigInt& at(HalfInt J) const {
        require_total_j(N, J);
        return values[static_cast<size_t>((J.twice() - j_min.twice()) / 2)];
    }
};

// One (j1, j2) subensemble sector and its mixing weight d^{j1}_n d^{j2}_{N-n} / d^J_N.
struct SubensemblePair {
    HalfInt j1;
    HalfInt j2;
    Rational weight;
};

/* Subensemble pairs compatible with total spin J when splitting N spins
 * into n and N-n: the triangle rule |j1-j2| <= J <= j1+j2 on the full
 * (j1, j2) grid. Ascending (j1, j2); weights sum to exactly 1. */
inline std::vector<SubensemblePair> allowed_pairs(HalfInt J, int N, int n) {
    if (n < 1 || n >= N)
        throw InvalidSplit("n = " + std::to_string(n) + " outside 1.." + std::to_string(N - 1));
    require_total_j(N, J);
    BigInt dJ = degeneracy(J, N);
    std::vector<SubensemblePair> out;
    for (HalfInt j1 = j_floor(n); j1.twice() <= n; j1 = j1 + 1) {
        for (HalfInt j2 = j_floor(N - n); j2.twice() <= N - n; j2 = j2 + 1) {
            if (J < (j1 - j2).abs() || j1 + j2 < J) continue;
            Rational w(degeneracy(j1, n) * degeneracy(j2, N - n), dJ);
            out.push_back({j1, j2, std::move(w)});
        }
    }
    return out;
}

/* A Clebsch-Gordan coefficient as sign * sqrt(square), with the square
 * held exactly. sign = 0 iff the coefficient vanishes. */
struct CGValue {
    int sign = 0;
    Rational square;

    double value() const {
        double v = std::sqrt(to_double(square));
        return sign < 0 ? -v : v;
    }
};

namespace detail {

/* Racah's closed form, rearranged so the alternating sum is an exact
 * integer:
 *
 *   sum_k (-1)^k / [k!(a-k)!(b-k)!(c-k)!(d+k)!(e+k)!]
 *     = sum_k (-1)^k C(a,k) C(g1, b-k) C(g2, c-k) / (a! g1! g2!)
 *
 * with g1 = b+d, g2 = c+e. Out-of-range binomials vanish, which encodes
 * the k limits for free. The remaining factorials join the prefactor in
 * a single rational reduction.
 */
inline CGValue cg_uncached(HalfInt J, HalfInt M, HalfInt j1, HalfInt m1, HalfInt j2,
                           HalfInt m2) {
    if (m1 + m2 != M) return {};
    if (J < (j1 - j2).abs() || j1 + j2 < J) return {};
    if (((j1.twice() + j2.twice() + J.twice()) & 1) != 0) return {};

    int a = (j1.twice() + j2.twice() - J.twice()) / 2;  // j1+j2-J
    int b = (j1.twice() - m1.twice()) / 2;              // j1-m1
    int c = (j2.twice() + m2.twice()) / 2;              // j2+m2
    int g1 = (J.twice() + j1.twice() - j2.twice()) / 2; // J+j1-j2
    int g2 = (J.twice() - j1.twice() + j2.twice()) / 2; // J-j1+j2

    BigInt z = 0;
    for (int k = 0; k <= a; ++k) {
        BigInt term = binomial(a, k) * binomial(g1, b - k) * binomial(g2, c - k);
        if (term == 0) continue;
        if (k & 1) z -= term;
        else z += term;
    }
    if (z == 0) return {};

    int jm = (J.twice() + M.twice()) / 2;
    int jm2 = (J.twice() - M.twice()) / 2;
    int p1 = (j1.twice() + m1.twice()) / 2;
    int q2 = (j2.twice() - m2.twice()) / 2;
    int h = (j1.twice() + j2.twice() + J.twice()) / 2 + 1;

    BigInt num = z * z * (J.twice() + 1);
    num *= factorial(jm);
    num *= factorial(jm2);
    num *= factorial(p1);
    num *= factorial(b);
    num *= factorial(c);
    num *= factorial(q2);
    BigInt den = factorial(h) * factorial(a) * factorial(g1) * factorial(g2);
    return {z > 0 ? 1 : -1, Rational(std::move(num), std::move(den))};
}

} // namespace detail

/* <j1,m1; j2,m2 | J,M> under the Condon-Shortley phase convention.
 * Exact: the returned square is a reduced big rational. Vanishing
 * selection rules (m1+m2 != M, triangle violations) give the zero
 * value; structurally impossible quantum numbers throw. */
inline CGValue cg(HalfInt J, HalfInt M, HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2) {
    if (J.twice() < 0 || j1.twice() < 0 || j2.twice() < 0 || !valid_m(J, M) ||
        !valid_m(j1, m1) || !valid_m(j2, m2))
        throw InvalidQuantumNumbers("cg: |m| <= j or parity character violated");
    return detail::cg_uncached(J, M, j1, m1, j2, m2);
}

using CGRow = std::vector<std::pair<HalfInt, CGValue>>;

/* All nonzero <j1,m1; j2,M-m1 | J,M> for fixed (J, M, j1, j2), ascending
 * in m1. Cached per thread; the reference stays valid for the thread's
 * lifetime. */
inline const CGRow& cg_row(HalfInt J, HalfInt M, HalfInt j1, HalfInt j2) {
    if (J.twice() < 0 || j1.twice() < 0 || j2.twice() < 0 || !valid_m(J, M))
        throw InvalidQuantumNumbers("cg_row: invalid (J, M, j1, j2)");
    thread_local std::map<std::array<int, 4>, CGRow> cache;
    std::array<int, 4> key{J.twice(), M.twice(), j1.twice(), j2.twice()};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    CGRow row;
    HalfInt lo = max(-j1, M - j2);
    HalfInt hi = min(j1, M + j2);
    for (HalfInt m1 = lo; m1 <= hi; m1 = m1 + 1) {
        HalfInt m2 = M - m1;
        if (!valid_m(j1, m1) || !valid_m(j2, m2)) continue;
        CGValue v = detail::cg_uncached(J, M, j1, m1, j2, m2);
        if (v.sign != 0) row.emplace_back(m1, std::move(v));
    }
    return cache.emplace(key, std::move(row)).first->second;
}

} // namespace spinent
