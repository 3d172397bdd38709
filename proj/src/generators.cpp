#include "kpsd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kpsd {

SymMatrix gnk(int n, int k) {
    if (n < 3 || k < 2 || k > n - 1) throw ArgumentError("gnk: need n >= 3 and 2 <= k <= n-1");
    SymMatrix m(n);
    const double off = -1.0 / (k - 1);
    for (int i = 0; i < n; ++i) {
        m.set(i, i, 1.0);
        for (int j = 0; j < i; ++j) m.set(i, j, off);
    }
    return m;
}

DiagonalCongruence::DiagonalCongruence(std::vector<double> entries) : d(std::move(entries)) {
    if (d.empty()) throw ArgumentError("DiagonalCongruence: empty diagonal");
    for (double v : d)
        if (std::abs(v) < 1e-12) throw ArgumentError("DiagonalCongruence: entry too close to zero");
}

SymMatrix congruence(const DiagonalCongruence& D, const SymMatrix& m) {
    if (static_cast<int>(D.d.size()) != m.dim())
        throw ArgumentError("congruence: diagonal size does not match matrix");
    SymMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j <= i; ++j) r.set(i, j, D.d[i] * m(i, j) * D.d[j]);
    return r;
}

DiagonalCongruence random_congruence(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        const double mag = rng.uniform(0.5, 2.0);
        d[i] = (rng.next() & 1) ? mag : -mag;
    }
    return DiagonalCongruence(std::move(d));
}

SymMatrix nls(int n, int k, const DiagonalCongruence& D, const Tolerances& tol) {
    if (n < 5 || k < 3 || k > n - 2) throw ArgumentError("nls: need n >= 5 and 3 <= k <= n-2");
    if (static_cast<int>(D.d.size()) != n) throw ArgumentError("nls: diagonal size must be n");
    tol.validate();

    const SymMatrix m = congruence(D, gnk(n, k));

    for (const auto& I : enumerate_index_sets(n, k)) {
        const SymMatrix block = principal_submatrix(m, I);
        if (det_sign(block, tol) != DetSign::Zero)
            throw NumericalError("nls: a k x k principal minor fell outside the zero band");
    }
    if (det_sign(m, tol) == DetSign::Zero)
        throw NumericalError("nls: determinant landed inside the zero band");
    if (!membership(m, ConeSpec(n, k, tol)).member)
        throw NumericalError("nls: constructed matrix failed membership at (n,k)");
    return m;
}

SymMatrix rank_one(const std::vector<double>& x) {
    if (x.empty()) throw ArgumentError("rank_one: empty vector");
    bool nonzero = false;
    for (double v : x) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw ArgumentError("rank_one: zero vector");
    return outer(x);
}

namespace {

// One seed stream per (seed, n, k, style), chained through splitmix64 so
// the derivation itself is platform independent.
std::uint64_t derive_seed(std::uint64_t seed, int n, int k, SampleStyle style) {
    SplitMix64 g(seed);
    std::uint64_t s = g.next() ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull);
    SplitMix64 h(s);
    s = h.next() ^ (static_cast<std::uint64_t>(k) * 0xBF58476D1CE4E5B9ull);
    SplitMix64 l(s);
    return l.next() ^ (static_cast<std::uint64_t>(style) * 0x94D049BB133111EBull);
}

SymMatrix gram(int n, int cols, SplitMix64& rng) {
    std::vector<std::vector<double>> b(n, std::vector<double>(cols));
    for (auto& row : b)
        for (auto& v : row) v = rng.uniform(-1.0, 1.0);
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m.set(i, j, dot(b[i], b[j]));
    return m;
}

} // namespace

SymMatrix random_member(const ConeSpec& spec, std::uint64_t seed, SampleStyle style) {
    SplitMix64 rng(derive_seed(seed, spec.n, spec.k, style));
    const int n = spec.n;

    SymMatrix m(n);
    switch (style) {
    case SampleStyle::Psd:
        m = gram(n, n, rng);
        break;
    case SampleStyle::Boundary: {
        const int span = std::max(1, n - 2);
        const int r = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(span));
        m = gram(n, r, rng);
        break;
    }
    case SampleStyle::Signed: {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m.set(i, j, rng.uniform(-1.0, 1.0));
        m = project_dykstra(m, spec, 50000).point;
        // The projection stops within convergence noise of the boundary,
        // where every rank and sign decision flickers; shift the diagonal
        // to put the sample a fixed relative distance inside the cone.
        const double nudge = 1e-4 * std::max(1.0, max_abs(m));
        for (int i = 0; i < n; ++i) m.set(i, i, m(i, i) + nudge);
        break;
    }
    }

    if (!membership(m, spec).member)
        throw NumericalError("random_member: sample failed strict membership");
    return m;
}

} // namespace kpsd
