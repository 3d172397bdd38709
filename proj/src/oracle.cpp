#include "kpsd/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "kpsd/generators.hpp"

namespace kpsd {

namespace {

// Coordinates over symmetric matrices: row-major lower triangle, the same
// layout as SymMatrix::lower(), so packing is the identity.
SymMatrix unpack(int n, const std::vector<double>& coords) {
    SymMatrix p(n);
    std::size_t c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) p.set(i, j, coords[c++]);
    return p;
}

// Orthogonalize against M, rescale, then bisect for the largest t <= 1
// with M +- tP both members; returns the replay-verified certificate or
// nothing if the direction escapes the face numerically.
std::optional<DecompCertificate> certify_direction(const SymMatrix& m, const ConeSpec& spec,
                                                   SymMatrix p) {
    const double mm = frob_inner(m, m);
    p = p - (frob_inner(p, m) / mm) * m;
    const double mnorm = std::sqrt(mm);
    const double pnorm = frob_norm(p);
    if (pnorm <= 1e-10 * std::max(1.0, mnorm)) return std::nullopt;
    p = (mnorm / pnorm) * p;

    const auto both_member = [&](double t) {
        return membership(m + t * p, spec).member && membership(m - t * p, spec).member;
    };
    double tstar = 1.0;
    if (!both_member(1.0)) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (both_member(mid) ? lo : hi) = mid;
        }
        tstar = lo;
    }
    if (tstar < 1e-10) return std::nullopt;

    SymMatrix a = 0.5 * (m + (0.5 * tstar) * p);
    DecompCertificate cert{a, m - a, CertKind::FaceDirection};
    cert.eps = 0.5 * tstar;
    if (!verify_certificate(m, cert, spec).valid) return std::nullopt;
    return cert;
}

} // namespace

FaceReport face_dimension(const SymMatrix& m, const ConeSpec& spec) {
    if (m.dim() != spec.n) throw ArgumentError("face_dimension: dimension mismatch");
    if (max_abs(m) == 0.0) throw ArgumentError("face_dimension: zero matrix");
    if (!membership(m, spec).member) throw ArgumentError("face_dimension: not a cone member");

    const int n = spec.n;
    const int ncoords = n * (n + 1) / 2;

    FaceReport report;
    std::vector<std::vector<double>> rows;
    for (const auto& I : enumerate_index_sets(n, spec.k)) {
        const SymMatrix block = principal_submatrix(m, I);
        const EigenDecomp d = eigen_sym(block);
        double lam_max = 0.0;
        for (double lam : d.values) lam_max = std::max(lam_max, std::abs(lam));
        const double thresh = spec.tol.rank_rel * std::max(1.0, lam_max);

        std::vector<std::vector<double>> kernel;
        for (int t = 0; t < I.size(); ++t)
            if (std::abs(d.values[t]) <= thresh) kernel.push_back(d.vectors[t]);
        if (kernel.empty()) continue;

        for (const auto& v : kernel) {
            // P_I v = 0, one scalar equation per row a of the block
            for (int a = 0; a < I.size(); ++a) {
                std::vector<double> row(ncoords, 0.0);
                for (int b = 0; b < I.size(); ++b) {
                    const int x = std::max(I.indices[a], I.indices[b]);
                    const int y = std::min(I.indices[a], I.indices[b]);
                    row[static_cast<std::size_t>(x) * (x + 1) / 2 + y] += v[b];
                }
                rows.push_back(std::move(row));
                ++report.constraint_count;
            }
        }
        report.active_blocks.emplace_back(I, std::move(kernel));
    }

    if (rows.empty()) {
        // interior point: the face is the whole space
        report.dimension = ncoords;
        for (int c = 0; c < ncoords; ++c) {
            std::vector<double> e(ncoords, 0.0);
            e[c] = 1.0;
            report.basis.push_back(unpack(n, e));
        }
        return report;
    }

    // nullity of the stacked system via the eigen-rank of C^T C, keeping
    // the same rank_rel threshold as symmat::rank
    SymMatrix ctc(ncoords);
    for (int a = 0; a < ncoords; ++a)
        for (int b = 0; b <= a; ++b) {
            double s = 0.0;
            for (const auto& row : rows) s += row[a] * row[b];
            ctc.set(a, b, s);
        }
    const EigenDecomp d = eigen_sym(ctc);
    double lam_max = 0.0;
    for (double lam : d.values) lam_max = std::max(lam_max, std::abs(lam));
    const double thresh = spec.tol.rank_rel * std::max(1.0, lam_max);
    for (int t = 0; t < ncoords; ++t) {
        if (std::abs(d.values[t]) <= thresh) {
            report.basis.push_back(unpack(n, d.vectors[t]));
            ++report.dimension;
        }
    }
    return report;
}

DecompCertificate decomposition_from_face(const SymMatrix& m, const ConeSpec& spec,
                                          const FaceReport& report) {
    if (report.dimension < 2)
        throw ArgumentError("decomposition_from_face: face dimension < 2");
    for (const SymMatrix& q : report.basis) {
        if (auto cert = certify_direction(m, spec, q)) return std::move(*cert);
    }
    throw NumericalError(
        "decomposition_from_face: every face direction collapsed in the line search");
}

std::optional<DecompCertificate> decomposition_search(const SymMatrix& m, const ConeSpec& spec,
                                                      int trials, std::uint64_t seed) {
    const FaceReport report = face_dimension(m, spec);
    const int ncoords = spec.n * (spec.n + 1) / 2;

    SplitMix64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> q(ncoords);
        for (double& v : q) v = rng.uniform(-1.0, 1.0);

        // filter through the active-block kernel conditions: project onto
        // the face subspace (the basis is orthonormal in coordinates)
        std::vector<double> proj(ncoords, 0.0);
        for (const SymMatrix& b : report.basis) {
            const std::vector<double>& bc = b.lower();
            const double c = dot(q, bc);
            for (int t = 0; t < ncoords; ++t) proj[t] += c * bc[t];
        }
        if (auto cert = certify_direction(m, spec, unpack(spec.n, proj))) return cert;
    }
    return std::nullopt;
}

} // namespace kpsd
