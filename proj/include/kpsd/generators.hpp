#pragma once

#include <cstdint>
#include <vector>

#include "kpsd/cone.hpp"
#include "kpsd/symmat.hpp"

namespace kpsd {

/// splitmix64: the fixed 64-bit mixing generator behind every seeded
/// sampler in this library, chosen so suites reproduce across platforms.
/// Frozen test vectors live in the generator tests.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// G(n,k) = k/(k-1)*I - 1/(k-1)*11^T: unit diagonal, off-diagonals
/// -1/(k-1). Spans an extreme ray of S^{n,k}_+.
SymMatrix gnk(int n, int k);

/// Diagonal of an invertible congruence D; entries bounded away from zero.
struct DiagonalCongruence {
    std::vector<double> d;
    explicit DiagonalCongruence(std::vector<double> entries);
};

/// D * M * D
SymMatrix congruence(const DiagonalCongruence& D, const SymMatrix& m);

/// Seeded congruence with entries of magnitude in [0.5, 2.0] and random sign.
DiagonalCongruence random_congruence(int n, std::uint64_t seed);

/// NLS matrix D*G(n,k)*D for n >= 5, 3 <= k <= n-2. Self-checking: verifies
/// vanishing k x k principal minors, det away from zero and membership at
/// (n,k) before returning; throws NumericalError otherwise.
SymMatrix nls(int n, int k, const DiagonalCongruence& D, const Tolerances& tol = {});

/// xx^T; throws on the zero vector.
SymMatrix rank_one(const std::vector<double>& x);

enum class SampleStyle { Psd, Boundary, Signed };

/// Deterministic seeded cone member. Psd: Gram matrix of n random vectors.
/// Boundary: Gram of rank <= n-2, so every (n-1)-block is rank deficient.
/// Signed: random symmetric matrix pushed into the cone by Dykstra
/// projection and nudged to strict membership. Output always passes
/// membership at spec tolerances.
SymMatrix random_member(const ConeSpec& spec, std::uint64_t seed, SampleStyle style);

} // namespace kpsd
