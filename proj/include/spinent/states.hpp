#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "spinent/angular.hpp"
#include "spinent/errors.hpp"
#include "spinent/half_int.hpp"
#include "spinent/hermitian.hpp"
#include "spinent/rational.hpp"

namespace spinent {

/* A logically pure PI state: one spin-J sector of N spins-1/2 carrying
 * the amplitude vector c_M, M = -J..J, uniformly mixed over the d^J_N
 * permutation copies. amplitudes[i] belongs to M = -J + i. */
struct PIState {
    int N = 0;
    HalfInt J;
    std::vector<Complex> amplitudes;

    size_t index_of(HalfInt M) const {
        return static_cast<size_t>((M.twice() + J.twice()) / 2);
    }
    HalfInt m_at(size_t i) const {
        return HalfInt::from_twice(-J.twice() + 2 * static_cast<int>(i));
    }
    Complex amp(HalfInt M) const {
        return valid_m(J, M) ? amplitudes[index_of(M)] : Complex(0.0, 0.0);
    }

    void validate() const {
        require_total_j(N, J);
        if (amplitudes.size() != static_cast<size_t>(J.twice() + 1))
            throw InvalidQuantumNumbers("PIState: amplitude vector length mismatch");
        double norm2 = 0.0;
        for (const auto& c : amplitudes) norm2 += std::norm(c);
        if (std::abs(norm2 - 1.0) > 1e-12)
            throw NonNormalized("PIState: |c|^2 sums to " + std::to_string(norm2));
    }
};

inline PIState eigenstate(int N, HalfInt J, HalfInt M) {
    require_total_j(N, J);
    if (!valid_m(J, M))
        throw InvalidQuantumNumbers("eigenstate: M = " + M.str() + " invalid for J = " + J.str());
    PIState s{N, J, std::vector<Complex>(static_cast<size_t>(J.twice() + 1), Complex(0.0))};
    s.amplitudes[s.index_of(M)] = 1.0;
    return s;
}

// Equal superposition of the two extremal levels, c_J = c_{-J} = 1/sqrt(2).
inline PIState ghz_like(int N, HalfInt J) {
    require_total_j(N, J);
    if (J.twice() == 0)
        throw DegenerateGHZ("ghz_like: J = 0 has only one extremal level");
    PIState s{N, J, std::vector<Complex>(static_cast<size_t>(J.twice() + 1), Complex(0.0))};
    double r = std::sqrt(0.5);
    s.amplitudes.front() = r;
    s.amplitudes.back() = r;
    return s;
}

/* Stationary state of the collective squeezing dissipator at tanh r = t:
 * c_{-J+2k} proportional to binom(J,k) sqrt(1/binom(2J,2k)) t^k, odd
 * offsets exactly zero. Weights are accumulated as exact rationals (t is
 * dyadic, so t^2k is exact) and each amplitude takes a single square
 * root; naive float products underflow near J ~ 50. */
inline PIState squeezed(int N, HalfInt J, double t) {
    require_total_j(N, J);
    if (N % 2 != 0 || !J.is_integer())
        throw InvalidQuantumNumbers("squeezed: needs even N and integer J");
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidSqueezing("squeezed: t = " + std::to_string(t) + " outside [0,1]");
    int j = J.twice() / 2;
    Rational t2 = Rational(t) * Rational(t);
    std::vector<Rational> w(static_cast<size_t>(j) + 1);
    Rational tpow = 1;
    Rational total = 0;
    for (int k = 0; k <= j; ++k) {
        BigInt b = binomial(j, k);
        w[static_cast<size_t>(k)] = Rational(b * b, binomial(2 * j, 2 * k)) * tpow;
        total += w[static_cast<size_t>(k)];
        tpow *= t2;
    }
    PIState s{N, J, std::vector<Complex>(static_cast<size_t>(J.twice() + 1), Complex(0.0))};
    for (int k = 0; k <= j; ++k)
        s.amplitudes[static_cast<size_t>(2 * k)] =
            std::sqrt(to_double(w[static_cast<size_t>(k)] / total));
    return s;
}

inline PIState custom(int N, HalfInt J, std::vector<Complex> amplitudes) {
    require_total_j(N, J);
    if (amplitudes.size() != static_cast<size_t>(J.twice() + 1))
        throw InvalidQuantumNumbers("custom: expected " + std::to_string(J.twice() + 1) +
                                    " amplitudes, got " + std::to_string(amplitudes.size()));
    double norm2 = 0.0;
    for (const auto& c : amplitudes) norm2 += std::norm(c);
    double norm = std::sqrt(norm2);
    if (norm < 1e-6) throw ZeroState("custom: amplitude vector has norm " + std::to_string(norm));
    for (auto& c : amplitudes) c /= norm;
    return PIState{N, J, std::move(amplitudes)};
}

// c_M -> c_{-M}: the image of flipping every spin, global phase dropped.
inline PIState spin_flip(PIState s) {
    std::reverse(s.amplitudes.begin(), s.amplitudes.end());
    return s;
}

/* General (not logically pure) PI state: a classical mixture over J
 * sectors, each carrying a density matrix on its c_M space. Only the
 * entanglement upper bound consumes these. */
struct GeneralSector {
    HalfInt J;
    double p = 0.0;
    HermitianMatrix rho;
};

struct GeneralPIState {
    int N = 0;
    std::vector<GeneralSector> sectors;

    void validate() const {
        double psum = 0.0;
        for (const auto& sec : sectors) {
            require_total_j(N, sec.J);
            if (sec.p < 0.0)
                throw NegativeProbability("GeneralPIState: sector weight " + std::to_string(sec.p));
            psum += sec.p;
            if (sec.rho.rows() != sec.J.twice() + 1)
                throw InvalidQuantumNumbers("GeneralPIState: rho dimension != 2J+1");
            require_hermitian(sec.rho);
            if (std::abs(sec.rho.trace().real() - 1.0) > 1e-10)
                throw NonNormalized("GeneralPIState: sector trace != 1");
            for (double ev : hermitian_eigenvalues(sec.rho))
                if (ev < -1e-10)
                    throw NegativeProbability("GeneralPIState: rho not PSD");
        }
        if (std::abs(psum - 1.0) > 1e-12)
            throw NonNormalized("GeneralPIState: sector weights sum to " + std::to_string(psum));
    }
};

} // namespace spinent
