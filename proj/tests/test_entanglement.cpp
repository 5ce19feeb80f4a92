#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "spinent/entanglement.hpp"
#include "spinent/oracle.hpp"
#include "spinent/states.hpp"

using namespace spinent;

namespace {

const std::complex<double> I(0.0, 1.0);

double block_sum(const EFResult& r) {
    double s = 0.0;
    for (const auto& b : r.blocks) s += to_double(b.pair.weight) * b.entropy;
    return s;
}

} // namespace

TEST_SUITE("entanglement") {

TEST_CASE("reduced blocks of reference eigenstates") {
    auto triplet = reduced_density(eigenstate(2, HalfInt(1), HalfInt(0)), 1, HalfInt::half(),
                                   HalfInt::half());
    REQUIRE(triplet.sigma1.rows() == 2);
    CHECK(std::abs(triplet.sigma1(0, 0).real() - 0.5) <= 1e-15);
    CHECK(std::abs(triplet.sigma1(1, 1).real() - 0.5) <= 1e-15);
    CHECK(std::abs(triplet.sigma1(0, 1)) <= 1e-15);
    CHECK(triplet.entropy == doctest::Approx(1.0).epsilon(1e-12));

    // rows are ascending m1, so m1 = -1/2 carries (J+M+1)/(2J+2) = 2/3
    auto doublet = reduced_density(eigenstate(3, HalfInt::half(), HalfInt::half()), 1,
                                   HalfInt::half(), HalfInt(1));
    CHECK(std::abs(doublet.sigma1(0, 0).real() - 2.0 / 3.0) <= 1e-14);
    CHECK(std::abs(doublet.sigma1(1, 1).real() - 1.0 / 3.0) <= 1e-14);
    CHECK(doublet.entropy == doctest::Approx(std::log2(3.0) - 2.0 / 3.0).epsilon(1e-12));

    // the stretched M = J = N/2 state reduces to a rank-1 projector
    auto top = reduced_density(eigenstate(6, HalfInt(3), HalfInt(3)), 2, HalfInt(1), HalfInt(2));
    CHECK((top.sigma1 * top.sigma1 - top.sigma1).norm() <= 1e-12);
    CHECK(top.entropy <= 1e-12);

    CHECK_THROWS_AS(reduced_density(eigenstate(4, HalfInt(1), HalfInt(0)), 2, HalfInt(0),
                                    HalfInt(0)),
                    PairNotAllowed);
}

TEST_CASE("reduced blocks are trace-one and positive") {
    for (int N : {4, 6}) {
        for (int jt = 0; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            std::vector<Complex> amps(static_cast<size_t>(jt) + 1);
            for (size_t i = 0; i < amps.size(); ++i)
                amps[i] = Complex(1.0 + static_cast<double>(i), i % 2 ? -0.5 : 0.25);
            PIState state = custom(N, J, amps);
            for (int n = 1; n < N; ++n) {
                for (const auto& pr : allowed_pairs(J, N, n)) {
                    auto block = reduced_density(state, n, pr.j1, pr.j2);
                    CHECK(std::abs(block.sigma1.trace().real() - 1.0) <= 1e-10);
                    auto ev = hermitian_eigenvalues(block.sigma1);
                    CHECK(ev.back() >= -1e-10);
                    double cap = std::log2(static_cast<double>(min(pr.j1, pr.j2).twice() + 1));
                    CHECK(block.entropy <= cap + 1e-10);
                }
            }
        }
    }
}

TEST_CASE("master formula reference points") {
    auto r = ef(eigenstate(2, HalfInt(1), HalfInt(0)), 1);
    CHECK(r.ef_bits == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.blocks.size() == 1);

    for (int N : {2, 4, 6, 8, 10}) {
        for (int jt = 0; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            CHECK(std::abs(ef(eigenstate(N, J, HalfInt(0)), 1).ef_bits - 1.0) <= 1e-10);
        }
    }

    CHECK(ef(eigenstate(5, HalfInt::from_twice(5), HalfInt::from_twice(5)), 2).ef_bits <= 1e-10);
    for (int N : {2, 4, 6, 8})
        CHECK(std::abs(ef(ghz_like(N, HalfInt(N / 2)), N / 2).ef_bits - 1.0) <= 1e-10);

    CHECK_THROWS_AS(ef(eigenstate(4, HalfInt(1), HalfInt(0)), 0), InvalidSplit);
    CHECK_THROWS_AS(ef(eigenstate(4, HalfInt(1), HalfInt(0)), 4), InvalidSplit);
}

TEST_CASE("weighted block sum reproduces the total") {
    for (int n : {1, 2, 3, 4, 5}) {
        auto r = ef(ghz_like(6, HalfInt(2)), n);
        CHECK(std::abs(r.ef_bits - block_sum(r)) <= 1e-12);
        double wsum = 0.0;
        for (const auto& b : r.blocks) wsum += to_double(b.pair.weight);
        CHECK(std::abs(wsum - 1.0) <= 1e-12);
    }
    // past-middle cuts fold back, so blocks describe the smaller side
    auto folded = ef(eigenstate(6, HalfInt(1), HalfInt(0)), 5);
    for (const auto& b : folded.blocks) CHECK(b.pair.j1 == HalfInt::half());
}

TEST_CASE("fast path agrees with the diagonalization path") {
    for (int N = 2; N <= 12; ++N) {
        for (int jt = N % 2; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            for (int mt = -jt; mt <= jt; mt += 2) {
                HalfInt M = HalfInt::from_twice(mt);
                for (int n = 1; n < N; ++n) {
                    double fast = ef_eigenstate(N, J, M, n).ef_bits;
                    double slow = ef(eigenstate(N, J, M), n).ef_bits;
                    CHECK(std::abs(fast - slow) <= 1e-10);
                }
            }
        }
    }
    for (int m : {0, 5, 12}) {
        double fast = ef_eigenstate(50, HalfInt(12), HalfInt(m), 25).ef_bits;
        double slow = ef(eigenstate(50, HalfInt(12), HalfInt(m)), 25).ef_bits;
        CHECK(std::abs(fast - slow) <= 1e-10);
    }
}

TEST_CASE("formula and brute force agree on every small system") {
    for (int N = 2; N <= 7; ++N) {
        for (int jt = N % 2; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            for (int mt = -jt; mt <= jt; mt += 2) {
                HalfInt M = HalfInt::from_twice(mt);
                for (int n = 1; n < N; ++n)
                    CHECK(std::abs(ef_eigenstate(N, J, M, n).ef_bits -
                                   oracle_ef(eigenstate(N, J, M), n)) <= 1e-9);
            }
            if (jt > 0)
                for (int n = 1; n < N; ++n)
                    CHECK(std::abs(ef(ghz_like(N, J), n).ef_bits -
                                   oracle_ef(ghz_like(N, J), n)) <= 1e-9);
        }
    }
    for (int N : {4, 6}) {
        for (int jt = 2; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            for (double t : {0.0, 0.5, 1.0}) {
                PIState s = squeezed(N, J, t);
                for (int n = 1; n < N; ++n)
                    CHECK(std::abs(ef(s, n).ef_bits - oracle_ef(s, n)) <= 1e-9);
            }
        }
    }
    // complex amplitudes exercise the sign and phase handling end to end
    PIState c1 = custom(5, HalfInt::from_twice(3), {0.5, 0.5 * I, -0.5, 0.5 * I});
    PIState c2 = custom(6, HalfInt(2), {1.0 + I, 0.0, -2.0, I, 0.5});
    for (const auto& s : {c1, c2})
        for (int n = 1; n < s.N; ++n)
            CHECK(std::abs(ef(s, n).ef_bits - oracle_ef(s, n)) <= 1e-9);
}

TEST_CASE("single spin closed form") {
    double expected = (8.0 - 3.0 * std::log2(3.0)) / 12.0;
    CHECK(ef_single_spin(4, HalfInt(1), HalfInt(1)) == doctest::Approx(expected).epsilon(1e-14));

    for (int N = 2; N <= 30; ++N) {
        for (int jt = N % 2; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            for (int mt = -jt; mt <= jt; mt += 2) {
                HalfInt M = HalfInt::from_twice(mt);
                double closed = ef_single_spin(N, J, M);
                CHECK(std::abs(closed - ef_eigenstate(N, J, M, 1).ef_bits) <= 1e-12);
                CHECK(closed == ef_single_spin(N, J, -M)); // exact M sign symmetry
            }
        }
    }

    for (int N : {2, 5, 12})
        CHECK(ef_single_spin(N, HalfInt::from_twice(N), HalfInt::from_twice(N)) == 0.0);
    for (int N : {2, 6, 20})
        CHECK(std::abs(ef_single_spin(N, HalfInt(0), HalfInt(0)) - 1.0) <= 1e-12);

    // aligned eigenstates collapse to the two-term expression
    for (int jt = 1; jt <= 12; ++jt) {
        HalfInt J = HalfInt::from_twice(jt);
        if (!valid_total_j(12, J)) continue;
        double j = jt / 2.0;
        double direct = (12 / 2.0 - j) / (12 * (2 * j + 1)) *
                        ((2 * j + 2) * std::log2(2 * j + 2) - (2 * j + 1) * std::log2(2 * j + 1));
        CHECK(std::abs(ef_single_spin(12, J, J) - direct) <= 1e-13);
    }

    CHECK_THROWS_AS(ef_single_spin(4, HalfInt(1), HalfInt(2)), InvalidQuantumNumbers);
    CHECK_THROWS_AS(ef_single_spin(4, HalfInt::half(), HalfInt::half()), InvalidJ);
}

TEST_CASE("qudit level distribution") {
    for (int N : {6, 9}) {
        HalfInt J = HalfInt::from_twice(N);
        for (int n = 1; n < N; ++n) {
            auto dist = qudit_distribution(J, N, n);
            REQUIRE(dist.exact.size() == 1);
            CHECK(dist.exact.begin()->first == std::min(n, N - n) + 1);
            CHECK(dist.exact.begin()->second == Rational(1));
        }
    }

    for (int N : {8, 13}) {
        for (int jt = N % 2; jt <= N; jt += 2) {
            HalfInt J = HalfInt::from_twice(jt);
            for (int n = 1; n < N; ++n) {
                auto dist = qudit_distribution(J, N, n);
                Rational total(0);
                double ptotal = 0.0;
                for (const auto& [d, w] : dist.exact) {
                    CHECK(d >= 1);
                    CHECK(w > 0);
                    total += w;
                    ptotal += dist.prob.at(d);
                }
                CHECK(total == Rational(1));
                CHECK(std::abs(ptotal - 1.0) <= 1e-12);
            }
        }
    }

    CHECK_THROWS_AS(qudit_distribution(HalfInt(1), 4, 0), InvalidSplit);
}

TEST_CASE("entropy budget split") {
    PIState eig = eigenstate(6, HalfInt(2), HalfInt(1));
    for (const auto& pr : allowed_pairs(eig.J, eig.N, 2)) {
        auto split = entropy_split(eig, 2, pr.j1, pr.j2);
        CHECK(split.schmidt_form);
        CHECK(split.extrinsic == 0.0);
        double block = reduced_density(eig, 2, pr.j1, pr.j2).entropy;
        CHECK(std::abs(split.intrinsic_weighted - block) <= 1e-10);
    }

    // disjoint extremal components: every pair of the cut has j1, j2 < J
    PIState ghz = ghz_like(8, HalfInt(3));
    for (int n : {3, 4}) {
        for (const auto& pr : allowed_pairs(ghz.J, ghz.N, n)) {
            auto split = entropy_split(ghz, n, pr.j1, pr.j2);
            CHECK(split.schmidt_form);
            CHECK(std::abs(split.extrinsic - 1.0) <= 1e-12);
            double block = reduced_density(ghz, n, pr.j1, pr.j2).entropy;
            CHECK(std::abs(split.extrinsic + split.intrinsic_weighted - block) <= 1e-10);
        }
    }
    // a lopsided cut reaches j2 >= J and the components overlap again
    CHECK_FALSE(entropy_split(ghz, 1, HalfInt::half(), HalfInt::from_twice(7)).schmidt_form);

    PIState low = ghz_like(5, HalfInt::half()); // the exceptional overlapping case
    for (const auto& pr : allowed_pairs(low.J, low.N, 1))
        CHECK_FALSE(entropy_split(low, 1, pr.j1, pr.j2).schmidt_form);

    CHECK_THROWS_AS(entropy_split(eig, 2, HalfInt(0), HalfInt(0)), PairNotAllowed);
}

TEST_CASE("upper bound for logically mixed states") {
    // rank-1 sector: the bound collapses to the pure-state value
    PIState ghz = ghz_like(4, HalfInt(2));
    HermitianMatrix rho = HermitianMatrix::Zero(5, 5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            rho(r, c) = ghz.amplitudes[static_cast<size_t>(r)] *
                        std::conj(ghz.amplitudes[static_cast<size_t>(c)]);
    GeneralPIState pure{4, {{HalfInt(2), 1.0, rho}}};
    for (int n : {1, 2})
        CHECK(std::abs(ef_upper_bound(pure, n) - ef(ghz, n).ef_bits) <= 1e-12);

    // maximally mixed triplet sector averages the three eigenstate values
    GeneralPIState mixed{2, {{HalfInt(1), 1.0, HermitianMatrix::Identity(3, 3) / 3.0}}};
    CHECK(ef_upper_bound(mixed, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    // two sectors combine with their sector probabilities
    GeneralPIState two{2,
                       {{HalfInt(0), 0.25, HermitianMatrix::Identity(1, 1)},
                        {HalfInt(1), 0.75, HermitianMatrix::Identity(3, 3) / 3.0}}};
    CHECK(ef_upper_bound(two, 1) == doctest::Approx(0.25 * 1.0 + 0.75 / 3.0).epsilon(1e-10));
    CHECK(ef_upper_bound(two, 1) >= 0.0);

    GeneralPIState bad{2, {{HalfInt(1), 0.5, HermitianMatrix::Identity(3, 3) / 3.0}}};
    CHECK_THROWS_AS(ef_upper_bound(bad, 1), NonNormalized);
}

TEST_CASE("magnetization and split symmetries") {
    PIState a = custom(7, HalfInt::from_twice(5), {0.1, 0.2 * I, 0.3, -0.4, 0.5 + 0.5 * I, 0.6});
    PIState b = custom(8, HalfInt(3), {1.0, -2.0, 3.0 * I, 0.0, 1.0 + I, 2.0, -1.0 * I});
    for (const auto& s : {a, b}) {
        for (int n = 1; n < s.N; ++n) {
            CHECK(std::abs(ef(s, n).ef_bits - ef(spin_flip(s), n).ef_bits) <= 1e-12);
            CHECK(ef(s, n).ef_bits == ef(s, s.N - n).ef_bits);
        }
    }
}

TEST_CASE("extremal superpositions add one bit when sectors stay disjoint") {
    /* The one-bit split needs every allowed pair to satisfy j1, j2 < J,
     * so the M = J and M = -J components touch disjoint basis vectors.
     * The largest realized j2 is min((N-n')/2, J + n'/2) for the folded
     * cut n' = min(n, N-n), hence the condition n' > N - 2J; at the even
     * split it is the familiar J > N/4. */
    for (auto [N, jt] : std::vector<std::pair<int, int>>{{8, 6}, {9, 7}, {10, 8}, {12, 8}}) {
        HalfInt J = HalfInt::from_twice(jt);
        PIState g = ghz_like(N, J);
        for (int n = N - jt + 1; n <= N / 2; ++n)
            CHECK(std::abs(ef(g, n).ef_bits - 1.0 - ef_eigenstate(N, J, J, n).ef_bits) <= 1e-10);
    }

    // below the threshold the components overlap and the bit is not whole
    PIState g = ghz_like(8, HalfInt(3));
    CHECK(std::abs(ef(g, 1).ef_bits - 1.0 - ef_eigenstate(8, HalfInt(3), HalfInt(3), 1).ef_bits) >
          1e-3);
}

} // TEST_SUITE
