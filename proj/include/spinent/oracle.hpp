#pragma once

#include <Eigen/Dense>

#include <bit>
#include <string>
#include <vector>

#include "spinent/angular.hpp"
#include "spinent/entropy.hpp"
#include "spinent/errors.hpp"
#include "spinent/half_int.hpp"
#include "spinent/hermitian.hpp"
#include "spinent/states.hpp"

/* Brute-force validator. Everything here works on explicit 2^N state
 * vectors in the computational z-basis, spin 1 most significant, bit 1
 * meaning up. It shares the exact CG engine with the formula path (one
 * implementation, two consumers) but nothing else: reduced matrices come
 * from direct index arithmetic, entropies from dense diagonalization. */

namespace spinent {

inline constexpr int oracle_max_n = 14;       // 16384-dim vectors at most
inline constexpr int path_average_max_n = 12;

struct DenseState {
    int N = 0;
    Eigen::VectorXcd amplitudes;
};

// Intermediate total angular momenta while coupling spins one at a time.
struct CouplingTree {
    std::vector<HalfInt> js; // js[k] = total after k+1 spins; js[0] = 1/2

    HalfInt final_j() const { return js.back(); }

    void validate() const {
        if (js.empty() || js[0] != HalfInt::half())
            throw InvalidQuantumNumbers("coupling path must start at j = 1/2");
        for (size_t k = 1; k < js.size(); ++k) {
            if ((js[k] - js[k - 1]).abs() != HalfInt::half() || js[k].twice() < 0)
                throw InvalidQuantumNumbers("coupling path steps must be +-1/2");
        }
    }
};

/* All coupling paths of `spins` spins-1/2 ending at total j, in a fixed
 * deterministic order (down-step before up-step at every level). The
 * count is exactly degeneracy(j, spins). */
inline std::vector<CouplingTree> enumerate_paths(int spins, HalfInt j) {
    require_total_j(spins, j);
    std::vector<std::vector<HalfInt>> partial{{HalfInt::half()}};
    for (int k = 2; k <= spins; ++k) {
        std::vector<std::vector<HalfInt>> next;
        for (const auto& p : partial) {
            for (HalfInt step : {p.back() - HalfInt::half(), p.back() + HalfInt::half()}) {
                if (step.twice() < 0 || step.twice() > k) continue;
                if ((j - step).abs().twice() > spins - k) continue; // j no longer reachable
                auto q = p;
                q.push_back(step);
                next.push_back(std::move(q));
            }
        }
        partial = std::move(next);
    }
    std::vector<CouplingTree> out;
    out.reserve(partial.size());
    for (auto& p : partial) out.push_back(CouplingTree{std::move(p)});
    return out;
}

/* Walk one coupling path, attaching each new spin at the least
 * significant bit. Returns the final-level vectors for every
 * magnetization, indexed by i with m = -j + i. They are orthonormal by
 * CG unitarity. */
inline std::vector<Eigen::VectorXcd> coupling_ladder(const CouplingTree& path) {
    std::vector<Eigen::VectorXcd> cur(2);
    cur[0] = Eigen::VectorXcd::Zero(2);
    cur[0](0) = 1.0; // m = -1/2 is spin down
    cur[1] = Eigen::VectorXcd::Zero(2);
    cur[1](1) = 1.0;
    for (size_t k = 2; k <= path.js.size(); ++k) {
        HalfInt jp = path.js[k - 2];
        HalfInt jn = path.js[k - 1];
        long dim = 1L << k;
        std::vector<Eigen::VectorXcd> next(static_cast<size_t>(jn.twice()) + 1);
        for (int idx = 0; idx <= jn.twice(); ++idx) {
            HalfInt m = HalfInt::from_twice(-jn.twice() + 2 * idx);
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
            for (const auto& [m1, g] : cg_row(jn, m, jp, HalfInt::half())) {
                const auto& prev = cur[static_cast<size_t>((m1.twice() + jp.twice()) / 2)];
                double c = g.value();
                if ((m - m1).twice() == 1) {
                    for (long i = 0; i < dim / 2; ++i) v(2 * i + 1) += c * prev(i);
                } else {
                    for (long i = 0; i < dim / 2; ++i) v(2 * i) += c * prev(i);
                }
            }
            next[static_cast<size_t>(idx)] = std::move(v);
        }
        cur = std::move(next);
    }
    return cur;
}

namespace detail {

// Spectrum of the reduced density matrix of the smaller side of the cut.
inline double dense_cut_entropy(const Eigen::VectorXcd& psi, int N, int n) {
    long dim1 = 1L << n;
    long dim2 = 1L << (N - n);
    using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> m(psi.data(), dim1, dim2);
    HermitianMatrix rho =
        dim1 <= dim2 ? HermitianMatrix(m * m.adjoint()) : HermitianMatrix(m.adjoint() * m);
    auto ev = hermitian_eigenvalues(rho);
    for (auto& p : ev)
        if (p < 1e-12) p = 0.0;
    return entropy_bits(ev);
}

} // namespace detail

struct BlockBasisEntry {
    HalfInt j1;
    int path1 = 0; // degeneracy label i^{j1}, in enumerate_paths order
    HalfInt j2;
    int path2 = 0;
    DenseState state;
};

/* The degeneracy basis aligned with the cut: couple spins 1..n to j1
 * (every path), spins n+1..N to j2 (every path), then the two blocks to
 * (J, M). Exactly d^J_N orthonormal vectors come back. */
inline std::vector<BlockBasisEntry> build_block_basis(int N, int n, HalfInt J, HalfInt M) {
    if (N > oracle_max_n)
        throw TooLarge("build_block_basis: N = " + std::to_string(N) + " exceeds " +
                       std::to_string(oracle_max_n));
    if (n < 1 || n >= N)
        throw InvalidSplit("build_block_basis: n = " + std::to_string(n));
    require_total_j(N, J);
    if (!valid_m(J, M)) throw InvalidQuantumNumbers("build_block_basis: invalid M");

    long dim2 = 1L << (N - n);
    std::vector<BlockBasisEntry> out;
    for (const auto& pr : allowed_pairs(J, N, n)) {
        auto pathsA = enumerate_paths(n, pr.j1);
        auto pathsB = enumerate_paths(N - n, pr.j2);
        std::vector<std::vector<Eigen::VectorXcd>> laddersA;
        laddersA.reserve(pathsA.size());
        for (const auto& p : pathsA) laddersA.push_back(coupling_ladder(p));
        for (size_t b = 0; b < pathsB.size(); ++b) {
            auto ladderB = coupling_ladder(pathsB[b]);
            for (size_t a = 0; a < pathsA.size(); ++a) {
                Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1L << N);
                for (const auto& [m1, g] : cg_row(J, M, pr.j1, pr.j2)) {
                    HalfInt m2 = M - m1;
                    const auto& v1 = laddersA[a][static_cast<size_t>((m1.twice() + pr.j1.twice()) / 2)];
                    const auto& v2 = ladderB[static_cast<size_t>((m2.twice() + pr.j2.twice()) / 2)];
                    double c = g.value();
                    for (long i1 = 0; i1 < v1.size(); ++i1) {
                        Complex w = c * v1(i1);
                        if (w == 0.0) continue;
                        psi.segment(i1 * dim2, dim2) += w * v2;
                    }
                }
                out.push_back({pr.j1, static_cast<int>(a), pr.j2, static_cast<int>(b),
                               DenseState{N, std::move(psi)}});
            }
        }
    }
    return out;
}

/* Entanglement of formation from first principles: for every degeneracy
 * label build the dense superposition sum_M c_M |J,M,N,i>, trace out one
 * side of the cut, diagonalize, average the entropies uniformly over the
 * d^J_N labels. Block-wise coupling keeps each label's vector compatible
 * with the bipartition, which is what makes this the right decomposition
 * to average over. */
inline double oracle_ef(const PIState& state, int n) {
    if (state.N > oracle_max_n)
        throw TooLarge("oracle_ef: N = " + std::to_string(state.N) + " exceeds " +
                       std::to_string(oracle_max_n));
    if (n < 1 || n >= state.N) throw InvalidSplit("oracle_ef: n = " + std::to_string(n));
    state.validate();
    const int N = state.N;
    long dim2 = 1L << (N - n);

    double total = 0.0;
    long labels = 0;
    for (const auto& pr : allowed_pairs(state.J, N, n)) {
        auto pathsA = enumerate_paths(n, pr.j1);
        auto pathsB = enumerate_paths(N - n, pr.j2);

        // cache the smaller block's ladders; stream the larger block's
        bool cache_first = n <= N - n;
        const auto& cachedPaths = cache_first ? pathsA : pathsB;
        const auto& streamPaths = cache_first ? pathsB : pathsA;
        std::vector<std::vector<Eigen::VectorXcd>> cached;
        cached.reserve(cachedPaths.size());
        for (const auto& p : cachedPaths) cached.push_back(coupling_ladder(p));

        for (const auto& sp : streamPaths) {
            auto streamed = coupling_ladder(sp);
            for (const auto& cl : cached) {
                const auto& ladder1 = cache_first ? cl : streamed;
                const auto& ladder2 = cache_first ? streamed : cl;
                Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1L << N);
                for (size_t mi = 0; mi < state.amplitudes.size(); ++mi) {
                    Complex c = state.amplitudes[mi];
                    if (c == 0.0) continue;
                    HalfInt M = state.m_at(mi);
                    for (const auto& [m1, g] : cg_row(state.J, M, pr.j1, pr.j2)) {
                        HalfInt m2 = M - m1;
                        const auto& v1 =
                            ladder1[static_cast<size_t>((m1.twice() + pr.j1.twice()) / 2)];
                        const auto& v2 =
                            ladder2[static_cast<size_t>((m2.twice() + pr.j2.twice()) / 2)];
                        Complex cw = c * g.value();
                        for (long i1 = 0; i1 < v1.size(); ++i1) {
                            Complex w = cw * v1(i1);
                            if (w == 0.0) continue;
                            psi.segment(i1 * dim2, dim2) += w * v2;
                        }
                    }
                }
                total += detail::dense_cut_entropy(psi, N, n);
                ++labels;
            }
        }
    }
    return total / static_cast<double>(labels);
}

// Entanglement entropy of an arbitrary dense pure state across 1..n | n+1..N.
inline double oracle_entropy_dense(const DenseState& state, int n) {
    if (state.N > oracle_max_n)
        throw TooLarge("oracle_entropy_dense: N = " + std::to_string(state.N) + " exceeds " +
                       std::to_string(oracle_max_n));
    if (n < 1 || n >= state.N)
        throw InvalidSplit("oracle_entropy_dense: n = " + std::to_string(n));
    if (state.amplitudes.size() != (1L << state.N))
        throw InvalidQuantumNumbers("oracle_entropy_dense: amplitude length != 2^N");
    if (std::abs(state.amplitudes.squaredNorm() - 1.0) > 1e-10)
        throw NonNormalized("oracle_entropy_dense: state is not unit norm");
    return detail::dense_cut_entropy(state.amplitudes, state.N, n);
}

/* Average cut entropy of the left-to-right sequential-coupling basis at
 * (J, M). That basis ignores the bipartition, so this average can only
 * exceed the optimal one: path_average_entropy >= oracle_ef. */
inline double path_average_entropy(int N, int n, HalfInt J, HalfInt M) {
    if (N > path_average_max_n)
        throw TooLarge("path_average_entropy: N = " + std::to_string(N) + " exceeds " +
                       std::to_string(path_average_max_n));
    if (n < 1 || n >= N) throw InvalidSplit("path_average_entropy: n = " + std::to_string(n));
    require_total_j(N, J);
    if (!valid_m(J, M)) throw InvalidQuantumNumbers("path_average_entropy: invalid M");

    auto paths = enumerate_paths(N, J);
    size_t midx = static_cast<size_t>((M.twice() + J.twice()) / 2);
    double total = 0.0;
    for (const auto& p : paths) {
        auto ladder = coupling_ladder(p);
        total += detail::dense_cut_entropy(ladder[midx], N, n);
    }
    return total / static_cast<double>(paths.size());
}

/* Collective operators applied matrix-free, for eigenvector checks:
 * J_z |b> = (popcount(b) - N/2) |b>, J_+ flips one down spin up. */
inline Eigen::VectorXcd jz_apply(const Eigen::VectorXcd& v, int N) {
    Eigen::VectorXcd out(v.size());
    for (long b = 0; b < v.size(); ++b)
        out(b) = (std::popcount(static_cast<unsigned long>(b)) - N / 2.0) * v(b);
    return out;
}

inline Eigen::VectorXcd jplus_apply(const Eigen::VectorXcd& v, int N) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (long b = 0; b < v.size(); ++b) {
        if (v(b) == 0.0) continue;
        for (int k = 0; k < N; ++k)
            if (!(b & (1L << k))) out(b | (1L << k)) += v(b);
    }
    return out;
}

inline Eigen::VectorXcd jminus_apply(const Eigen::VectorXcd& v, int N) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (long b = 0; b < v.size(); ++b) {
        if (v(b) == 0.0) continue;
        for (int k = 0; k < N; ++k)
            if (b & (1L << k)) out(b & ~(1L << k)) += v(b);
    }
    return out;
}

// J^2 = J_- J_+ + J_z (J_z + 1)
inline Eigen::VectorXcd jsq_apply(const Eigen::VectorXcd& v, int N) {
    Eigen::VectorXcd out = jminus_apply(jplus_apply(v, N), N);
    out += jz_apply(jz_apply(v, N), N);
    out += jz_apply(v, N);
    return out;
}

} // namespace spinent
