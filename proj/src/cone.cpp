#include "kpsd/cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kpsd {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<IndexSet> enumerate_index_sets(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw ArgumentError("enumerate_index_sets: need 1 <= k <= n");
    if (binomial(n, k) > 2'000'000)
        throw ArgumentError("enumerate_index_sets: C(n,k) too large for exhaustive enumeration");
    std::vector<IndexSet> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.emplace_back(cur, n);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

MembershipReport membership(const SymMatrix& m, const ConeSpec& spec) {
    if (m.dim() != spec.n) throw ArgumentError("membership: matrix dimension does not match spec");
    MembershipReport report;
    const auto blocks = enumerate_index_sets(spec.n, spec.k);
    report.blocks_checked = static_cast<long long>(blocks.size());
    for (const auto& I : blocks) {
        const SymMatrix block = principal_submatrix(m, I);
        const EigenDecomp d = eigen_sym(block);
        double lam_max = 0.0;
        for (double lam : d.values) lam_max = std::max(lam_max, std::abs(lam));
        const double slack = spec.tol.eig_psd * std::max(1.0, lam_max);
        if (d.values.front() < -slack) report.violations.emplace_back(I, d.values.front());
    }
    report.member = report.violations.empty();
    return report;
}

namespace {

// Frobenius projection of one k x k block onto the PSD cone: clip the
// negative eigenvalues. Everything outside the block is untouched.
SymMatrix clip_psd(const SymMatrix& block) {
    const EigenDecomp d = eigen_sym(block);
    const int k = block.dim();
    SymMatrix out(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b <= a; ++b) {
            double s = 0.0;
            for (int t = 0; t < k; ++t) {
                if (d.values[t] <= 0.0) continue;
                s += d.values[t] * d.vectors[t][a] * d.vectors[t][b];
            }
            out.set(a, b, s);
        }
    return out;
}

} // namespace

ProjectionResult project_dykstra(const SymMatrix& m, const ConeSpec& spec, int max_sweeps) {
    if (m.dim() != spec.n) throw ArgumentError("project_dykstra: dimension mismatch");
    if (max_sweeps < 1) throw ArgumentError("project_dykstra: max_sweeps must be >= 1");

    // members are fixed points; skip the sweep machinery entirely
    if (membership(m, spec).member) return ProjectionResult{m, 0.0, 0};

    const auto blocks = enumerate_index_sets(spec.n, spec.k);
    std::vector<SymMatrix> corrections(blocks.size(), SymMatrix(spec.k));
    SymMatrix x = m;
    const double thresh = 1e-7 * frob_norm(m);
    const ConeSpec relaxed = spec.relaxed(10.0);

    double residual = 0.0;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        const SymMatrix before = x;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const IndexSet& I = blocks[bi];
            const SymMatrix y = principal_submatrix(x, I) + corrections[bi];
            const SymMatrix proj = clip_psd(y);
            corrections[bi] = y - proj;
            for (int a = 0; a < I.size(); ++a)
                for (int b = 0; b <= a; ++b) x.set(I.indices[a], I.indices[b], proj(a, b));
        }
        residual = frob_norm(x - before);
        if (residual <= thresh && membership(x, relaxed).member)
            return ProjectionResult{x, residual, sweep};
    }
    throw ProjectionError("project_dykstra: sweep cap reached with residual " +
                              std::to_string(residual),
                          x, residual);
}

} // namespace kpsd
