#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "spinent/errors.hpp"
#include "spinent/rational.hpp"

namespace spinent {

/* Shannon entropy in bits of a probability vector. Eigensolver dust is
 * tolerated: p in [-1e-12, 0) clamps to 0, anything more negative is a
 * real error. The list must sum to 1 within 1e-9. */
inline double entropy_bits(std::span<const double> probs) {
    double sum = 0.0;
    double h = 0.0;
    for (double p : probs) {
        if (p < 0.0) {
            if (p < -1e-12) throw NegativeProbability("entropy_bits: p = " + std::to_string(p));
            p = 0.0;
        }
        sum += p;
        if (p > 0.0) h -= p * std::log2(p);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw NonNormalized("entropy_bits: probabilities sum to " + std::to_string(sum));
    return h < 0.0 ? 0.0 : h;
}

inline double entropy_bits(const std::vector<double>& probs) {
    return entropy_bits(std::span<const double>(probs));
}

/* -sum_i w_i p_i log2(p_i) evaluated from exact rationals. The product
 * w*p is formed exactly and rounded once; only the logarithm argument
 * goes through floating point. Weights need not sum to anything. */
inline double rational_log2_entropy(const std::vector<std::pair<Rational, Rational>>& terms) {
    double h = 0.0;
    for (const auto& [w, p] : terms) {
        if (p < 0) throw NegativeProbability("rational_log2_entropy: negative probability");
        if (p > 1) throw NonNormalized("rational_log2_entropy: probability above 1");
        if (p == 0) continue;
        h -= to_double(w * p) * std::log2(to_double(p));
    }
    return h < 0.0 ? 0.0 : h;
}

} // namespace spinent
