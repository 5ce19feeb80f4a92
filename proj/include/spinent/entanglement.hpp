#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spinent/angular.hpp"
#include "spinent/entropy.hpp"
#include "spinent/errors.hpp"
#include "spinent/half_int.hpp"
#include "spinent/hermitian.hpp"
#include "spinent/states.hpp"

namespace spinent {

/* One subensemble pair's contribution to E_F: the reduced density matrix
 * sigma1 of the j1 side, indexed by ascending m1 = -j1..j1, and its
 * entropy in bits. */
struct ReducedBlock {
    SubensemblePair pair;
    HermitianMatrix sigma1;
    double entropy = 0.0;
};

struct EFResult {
    double ef_bits = 0.0;
    std::vector<ReducedBlock> blocks; // ascending (j1, j2), weights sum to 1
};

// Probability that a subensemble pair acts as a two-qudit system of d levels.
struct DDistribution {
    std::map<int, Rational> exact;
    std::map<int, double> prob;
};

/* Entropy budget of one block: the part coming from the c_M distribution
 * and the part from the CG spreading, per the Schmidt-form decomposition.
 * Their sum equals the block entropy only when no |j,m> vector on either
 * side is shared between two different M components. */
struct EntropySplit {
    double extrinsic = 0.0;
    double intrinsic_weighted = 0.0;
    bool schmidt_form = false;
};

namespace detail {

inline SubensemblePair require_pair(const std::vector<SubensemblePair>& pairs, HalfInt j1,
                                    HalfInt j2) {
    for (const auto& pr : pairs)
        if (pr.j1 == j1 && pr.j2 == j2) return pr;
    throw PairNotAllowed("(j1, j2) = (" + j1.str() + ", " + j2.str() + ") is not an allowed pair");
}

/* sigma1 = A A^dag with A[m1, m2] = c_{m1+m2} C^{J, m1+m2}_{j1 m1; j2 m2}.
 * The rank update keeps it Hermitian by construction. */
inline ReducedBlock block_of(const PIState& state, const SubensemblePair& pr) {
    int d1 = pr.j1.twice() + 1;
    int d2 = pr.j2.twice() + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d1, d2);
    for (size_t mi = 0; mi < state.amplitudes.size(); ++mi) {
        Complex c = state.amplitudes[mi];
        if (c == 0.0) continue;
        HalfInt M = state.m_at(mi);
        for (const auto& [m1, g] : cg_row(state.J, M, pr.j1, pr.j2)) {
            HalfInt m2 = M - m1;
            a((m1.twice() + pr.j1.twice()) / 2, (m2.twice() + pr.j2.twice()) / 2) = c * g.value();
        }
    }
    ReducedBlock block{pr, HermitianMatrix::Zero(d1, d1), 0.0};
    block.sigma1.selfadjointView<Eigen::Lower>().rankUpdate(a);
    block.sigma1 = block.sigma1.selfadjointView<Eigen::Lower>();
    auto ev = hermitian_eigenvalues(block.sigma1);
    for (auto& p : ev)
        if (p < 1e-12) p = 0.0;
    block.entropy = entropy_bits(ev);
    return block;
}

} // namespace detail

/* The j1-side reduced density matrix of one subensemble pair. The pair
 * must be allowed for the (J, N, n) split; j1 always labels the block of
 * the first n spins. */
inline ReducedBlock reduced_density(const PIState& state, int n, HalfInt j1, HalfInt j2) {
    state.validate();
    SubensemblePair pr = detail::require_pair(allowed_pairs(state.J, state.N, n), j1, j2);
    return detail::block_of(state, pr);
}

/* Entanglement of formation across the first n spins versus the rest:
 * the weighted average of the block entropies. Cuts past the middle are
 * folded back to N-n, which is exact because the two reduced states of a
 * pure block share their spectrum. */
inline EFResult ef(const PIState& state, int n) {
    if (n < 1 || n >= state.N) throw InvalidSplit("ef: n = " + std::to_string(n));
    state.validate();
    int nn = std::min(n, state.N - n);
    EFResult res;
    for (const auto& pr : allowed_pairs(state.J, state.N, nn)) {
        res.blocks.push_back(detail::block_of(state, pr));
        res.ef_bits += to_double(pr.weight) * res.blocks.back().entropy;
    }
    return res;
}

/* Fast path for sector eigenstates: the product basis already is the
 * Schmidt basis, so the block eigenvalues are exact CG squares and no
 * matrix needs diagonalizing. */
inline EFResult ef_eigenstate(int N, HalfInt J, HalfInt M, int n) {
    require_total_j(N, J);
    if (!valid_m(J, M)) throw InvalidQuantumNumbers("ef_eigenstate: M = " + M.str());
    if (n < 1 || n >= N) throw InvalidSplit("ef_eigenstate: n = " + std::to_string(n));
    int nn = std::min(n, N - n);
    EFResult res;
    for (const auto& pr : allowed_pairs(J, N, nn)) {
        int d1 = pr.j1.twice() + 1;
        ReducedBlock block{pr, HermitianMatrix::Zero(d1, d1), 0.0};
        std::vector<std::pair<Rational, Rational>> terms;
        for (const auto& [m1, g] : cg_row(J, M, pr.j1, pr.j2)) {
            int idx = (m1.twice() + pr.j1.twice()) / 2;
            block.sigma1(idx, idx) = to_double(g.square);
            terms.emplace_back(Rational(1), g.square);
        }
        block.entropy = rational_log2_entropy(terms);
        res.ef_bits += to_double(pr.weight) * block.entropy;
        res.blocks.push_back(std::move(block));
    }
    return res;
}

/* Closed form for the n = 1 cut of an eigenstate. The two j2 branches
 * contribute with weights that vanish automatically at the edge sectors
 * J = N/2 and J = 0, and 0 log 0 terms are zero. */
inline double ef_single_spin(int N, HalfInt J, HalfInt M) {
    require_total_j(N, J);
    if (!valid_m(J, M)) throw InvalidQuantumNumbers("ef_single_spin: M = " + M.str());
    if (N < 2) throw InvalidSplit("ef_single_spin: N = " + std::to_string(N));
    double j = J.twice() / 2.0;
    double m = M.twice() / 2.0;
    auto term = [](double p, double q) { return p > 0.0 ? p * std::log2(p / q) : 0.0; };
    double upper = (N / 2.0 - j) * (term(j - m + 1, 2 * j + 2) + term(j + m + 1, 2 * j + 2));
    double lower = (N / 2.0 + j + 1) * (term(j + m, 2 * j) + term(j - m, 2 * j));
    return -(upper + lower) / (N * (2 * j + 1));
}

/* How often the cut sees an effective two-qudit system with d levels,
 * d = 2 min(j1, j2) + 1. Exact rational weights, realized d only. */
inline DDistribution qudit_distribution(HalfInt J, int N, int n) {
    DDistribution out;
    for (const auto& pr : allowed_pairs(J, N, n))
        out.exact[std::min(pr.j1, pr.j2).twice() + 1] += pr.weight;
    for (const auto& [d, w] : out.exact) out.prob[d] = to_double(w);
    return out;
}

/* Split one block's entropy into the c_M part and the CG part. The split
 * reproduces the block entropy exactly when the M components touch
 * pairwise disjoint basis vectors on both sides of the cut. */
inline EntropySplit entropy_split(const PIState& state, int n, HalfInt j1, HalfInt j2) {
    state.validate();
    SubensemblePair pr = detail::require_pair(allowed_pairs(state.J, state.N, n), j1, j2);

    EntropySplit out;
    out.schmidt_form = true;
    std::map<int, int> seen1, seen2; // m1.twice() / m2.twice() -> M.twice()
    for (size_t mi = 0; mi < state.amplitudes.size(); ++mi) {
        double w = std::norm(state.amplitudes[mi]);
        if (w == 0.0) continue;
        HalfInt M = state.m_at(mi);
        out.extrinsic -= w * std::log2(w);
        std::vector<std::pair<Rational, Rational>> terms;
        for (const auto& [m1, g] : cg_row(state.J, M, pr.j1, pr.j2)) {
            terms.emplace_back(Rational(1), g.square);
            for (auto* side : {&seen1, &seen2}) {
                int key = side == &seen1 ? m1.twice() : (M - m1).twice();
                auto [it, fresh] = side->emplace(key, M.twice());
                if (!fresh && it->second != M.twice()) out.schmidt_form = false;
            }
        }
        out.intrinsic_weighted += w * rational_log2_entropy(terms);
    }
    if (out.extrinsic < 0.0) out.extrinsic = 0.0;
    return out;
}

/* Upper bound on E_F of a logically mixed PI state: decompose every
 * sector's rho into eigenvectors and average their pure-state E_F with
 * weights p_J mu_k. Any such decomposition bounds the convex-roof
 * minimum from above. */
inline double ef_upper_bound(const GeneralPIState& state, int n) {
    state.validate();
    double bound = 0.0;
    for (const auto& sec : state.sectors) {
        if (sec.p == 0.0) continue;
        auto [vals, vecs] = hermitian_eigensystem(sec.rho);
        for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
            if (vals[static_cast<size_t>(k)] <= 1e-12) continue;
            std::vector<Complex> amps(vecs.rows());
            for (Eigen::Index r = 0; r < vecs.rows(); ++r) amps[static_cast<size_t>(r)] = vecs(r, k);
            bound += sec.p * vals[static_cast<size_t>(k)] *
                     ef(custom(state.N, sec.J, std::move(amps)), n).ef_bits;
        }
    }
    return bound;
}

} // namespace spinent
