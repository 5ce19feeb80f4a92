#pragma once

#include <stdexcept>
#include <string>

namespace spinent {

// Base class for everything this library throws deliberately.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// quantum number outside the allowed lattice for the given ensemble
struct InvalidQuantumNumbers : Error { using Error::Error; };
struct InvalidJ : InvalidQuantumNumbers { using InvalidQuantumNumbers::InvalidQuantumNumbers; };

// bipartition size n outside 1..N-1
struct InvalidSplit : Error { using Error::Error; };

// (j1, j2) not compatible with (J, N, n)
struct PairNotAllowed : Error { using Error::Error; };

struct NonNormalized : Error { using Error::Error; };
struct NegativeProbability : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// GHZ-like superposition needs two distinct extremal levels, so J >= 1/2
struct DegenerateGHZ : Error { using Error::Error; };
struct InvalidSqueezing : Error { using Error::Error; };
struct ZeroState : Error { using Error::Error; };

// brute-force oracle asked for a Hilbert space it refuses to allocate
struct TooLarge : Error { using Error::Error; };

} // namespace spinent
