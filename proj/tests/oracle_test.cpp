#include <doctest.h>

#include <cmath>

#include "kpsd/generators.hpp"
#include "kpsd/oracle.hpp"
#include "test_helpers.hpp"

using namespace kpsd;
using namespace kpsd::testing;

namespace {

SymMatrix ones(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m.set(i, j, 1.0);
    return m;
}

// residual of the kernel-containment constraints for one basis element
double constraint_residual(const SymMatrix& p, const FaceReport& report) {
    double worst = 0.0;
    for (const auto& [block, kernel] : report.active_blocks) {
        const SymMatrix pb = principal_submatrix(p, block);
        for (const auto& v : kernel) worst = std::max(worst, max_abs(matvec(pb, v)));
    }
    return worst;
}

bool span_contains(const FaceReport& report, const SymMatrix& m) {
    const std::vector<double>& coords = m.lower();
    std::vector<double> proj(coords.size(), 0.0);
    for (const SymMatrix& b : report.basis) {
        const double c = dot(coords, b.lower());
        for (std::size_t t = 0; t < coords.size(); ++t) proj[t] += c * b.lower()[t];
    }
    double worst = 0.0;
    for (std::size_t t = 0; t < coords.size(); ++t)
        worst = std::max(worst, std::abs(proj[t] - coords[t]));
    return worst <= 1e-8 * std::max(1.0, max_abs(m));
}

} // namespace

TEST_CASE("face_dimension of an interior point is the full space") {
    const FaceReport report = face_dimension(SymMatrix::identity(3), ConeSpec(3, 2));
    CHECK(report.dimension == 6);
    CHECK(report.constraint_count == 0);
    CHECK(report.active_blocks.empty());
    CHECK(report.basis.size() == 6);
    CHECK(span_contains(report, SymMatrix::identity(3)));
}

TEST_CASE("face_dimension of G(3,2) is 1") {
    const SymMatrix g = gnk(3, 2);
    const FaceReport report = face_dimension(g, ConeSpec(3, 2));
    CHECK(report.dimension == 1);
    CHECK(report.active_blocks.size() == 3);
    CHECK(report.constraint_count == 6); // 3 blocks x kernel dim 1 x 2 rows
    REQUIRE(report.basis.size() == 1);
    // the single basis element is a multiple of M
    const double c = frob_inner(report.basis[0], g) / frob_inner(g, g);
    CHECK(frob_norm(report.basis[0] - c * g) <= 1e-8);
    CHECK(constraint_residual(report.basis[0], report) <= 1e-8);
}

TEST_CASE("face_dimension of the all-ones matrix is 1") {
    const FaceReport report = face_dimension(ones(3), ConeSpec(3, 2));
    CHECK(report.dimension == 1);
    CHECK(span_contains(report, ones(3)));
}

TEST_CASE("face_dimension argument errors") {
    CHECK_THROWS_AS(face_dimension(SymMatrix(3), ConeSpec(3, 2)), ArgumentError);
    CHECK_THROWS_AS(face_dimension(gnk(4, 3), ConeSpec(4, 4)), ArgumentError);
    CHECK_THROWS_AS(face_dimension(SymMatrix::identity(3), ConeSpec(4, 2)), ArgumentError);
}

TEST_CASE("face basis satisfies the active constraints and spans M") {
    SplitMix64 rng(73);
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const int n = 3 + static_cast<int>(rng.next() % 3);
        const int k = 2 + static_cast<int>(rng.next() % (n - 1));
        const ConeSpec spec(n, k);
        const SymMatrix m = random_member(spec, seed, static_cast<SampleStyle>(seed % 3));
        const FaceReport report = face_dimension(m, spec);
        CHECK(report.dimension >= 1);
        CHECK(span_contains(report, m));
        const double scale = std::max(1.0, max_abs(m));
        for (const SymMatrix& b : report.basis)
            CHECK(constraint_residual(b, report) <= 1e-8 * scale);
    }
}

TEST_CASE("gnk face dimension is 1 in the middle range") {
    CHECK(face_dimension(gnk(5, 3), ConeSpec(5, 3)).dimension == 1);
    CHECK(face_dimension(gnk(6, 4), ConeSpec(6, 4)).dimension == 1);
}

TEST_CASE("constraint_count for congruences of gnk(n, n-1) is n(n-1)") {
    for (int n = 3; n <= 6; ++n) {
        const SymMatrix m = congruence(random_congruence(n, 5), gnk(n, n - 1));
        const FaceReport report = face_dimension(m, ConeSpec(n, n - 1));
        CHECK(report.constraint_count == static_cast<long long>(n) * (n - 1));
        CHECK(report.dimension == 1);
    }
}

TEST_CASE("decomposition_from_face on interior and boundary points") {
    const ConeSpec spec(3, 2);
    const FaceReport ri = face_dimension(SymMatrix::identity(3), spec);
    const DecompCertificate ci = decomposition_from_face(SymMatrix::identity(3), spec, ri);
    CHECK(verify_certificate(SymMatrix::identity(3), ci, spec).valid);

    SymMatrix d110(3);
    d110.set(0, 0, 1.0);
    d110.set(1, 1, 1.0);
    const FaceReport rd = face_dimension(d110, spec);
    CHECK(rd.dimension >= 2);
    const DecompCertificate cd = decomposition_from_face(d110, spec, rd);
    CHECK(verify_certificate(d110, cd, spec).valid);

    const FaceReport rg = face_dimension(gnk(3, 2), spec);
    CHECK_THROWS_AS(decomposition_from_face(gnk(3, 2), spec, rg), ArgumentError);
}

TEST_CASE("decomposition_search on extreme matrices returns nothing") {
    CHECK_FALSE(decomposition_search(gnk(4, 3), ConeSpec(4, 3), 500, 11).has_value());
    CHECK_FALSE(decomposition_search(rank_one({1, 2, 3}), ConeSpec(3, 2), 500, 5).has_value());
}

TEST_CASE("decomposition_search finds certificates on interior points") {
    const auto cert = decomposition_search(SymMatrix::identity(4), ConeSpec(4, 3), 50, 2);
    REQUIRE(cert.has_value());
    CHECK(verify_certificate(SymMatrix::identity(4), *cert, ConeSpec(4, 3)).valid);
}

TEST_CASE("oracle self-consistency on random members") {
    SplitMix64 rng(79);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int n = 3 + static_cast<int>(rng.next() % 3);
        const int k = 2 + static_cast<int>(rng.next() % (n - 1));
        const ConeSpec spec(n, k);
        const SymMatrix m = random_member(spec, seed, static_cast<SampleStyle>(seed % 3));
        const FaceReport report = face_dimension(m, spec);
        const auto cert = decomposition_search(m, spec, 20, seed);
        if (cert) {
            CHECK(report.dimension >= 2);
            CHECK(verify_certificate(m, *cert, spec).valid);
        }
        if (report.dimension == 1) CHECK_FALSE(cert.has_value());
    }
}

TEST_CASE("face dimension decreases as the block size grows on PSD members") {
    SplitMix64 rng(83);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(rng.next() % 3);
        const int r = 1 + static_cast<int>(rng.next() % n);
        const SymMatrix m = random_gram(n, r, rng);
        for (int k = 2; k < n; ++k) {
            const int dk = face_dimension(m, ConeSpec(n, k)).dimension;
            const int dk1 = face_dimension(m, ConeSpec(n, k + 1)).dimension;
            CHECK(dk >= dk1);
        }
    }
}
