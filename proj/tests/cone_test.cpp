#include <doctest.h>

#include <cmath>

#include "kpsd/cone.hpp"
#include "kpsd/generators.hpp"
#include "test_helpers.hpp"

using namespace kpsd;
using namespace kpsd::testing;

TEST_CASE("enumerate_index_sets") {
    const auto s32 = enumerate_index_sets(3, 2);
    REQUIRE(s32.size() == 3);
    CHECK(s32[0].indices == std::vector<int>{0, 1});
    CHECK(s32[1].indices == std::vector<int>{0, 2});
    CHECK(s32[2].indices == std::vector<int>{1, 2});

    const auto s44 = enumerate_index_sets(4, 4);
    REQUIRE(s44.size() == 1);
    CHECK(s44[0].indices == std::vector<int>{0, 1, 2, 3});

    const auto s53 = enumerate_index_sets(5, 3);
    REQUIRE(s53.size() == 10);
    CHECK(s53.front().indices == std::vector<int>{0, 1, 2});
    CHECK(s53.back().indices == std::vector<int>{2, 3, 4});

    CHECK_THROWS_AS(enumerate_index_sets(3, 4), ArgumentError);
    CHECK_THROWS_AS(enumerate_index_sets(3, 0), ArgumentError);
}

TEST_CASE("membership of G(4,3) at both block sizes") {
    const SymMatrix g = gnk(4, 3);

    const MembershipReport at3 = membership(g, ConeSpec(4, 3));
    CHECK(at3.member);
    CHECK(at3.blocks_checked == 4);
    CHECK(at3.violations.empty());

    const MembershipReport at4 = membership(g, ConeSpec(4, 4));
    CHECK_FALSE(at4.member);
    REQUIRE(at4.violations.size() == 1);
    CHECK(at4.violations[0].first.indices == std::vector<int>{0, 1, 2, 3});
    CHECK(at4.violations[0].second == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("zero matrix is a member of every cone") {
    for (int k = 1; k <= 4; ++k) CHECK(membership(SymMatrix(4), ConeSpec(4, k)).member);
}

TEST_CASE("membership dimension mismatch") {
    CHECK_THROWS_AS(membership(SymMatrix(3), ConeSpec(4, 2)), ArgumentError);
}

TEST_CASE("monotone nesting: member at k2 implies member at k1 < k2") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 5);
        const SymMatrix m = random_sym(n, rng);
        std::vector<bool> member(n + 1);
        for (int k = 1; k <= n; ++k) member[k] = membership(m, ConeSpec(n, k)).member;
        for (int k1 = 1; k1 < n; ++k1)
            for (int k2 = k1 + 1; k2 <= n; ++k2)
                if (member[k2]) CHECK(member[k1]);
    }
}

TEST_CASE("membership at k = n matches is_psd") {
    SplitMix64 rng(37);
    Tolerances tol;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 6);
        const SymMatrix m = (trial % 2 == 0) ? random_sym(n, rng) : random_gram(n, n, rng);
        CHECK(membership(m, ConeSpec(n, n, tol)).member == is_psd(m, tol));
    }
}

TEST_CASE("G(n,k) is a member at k and a non-member at k+1") {
    for (int n = 3; n <= 8; ++n) {
        for (int k = 2; k <= n - 1; ++k) {
            const SymMatrix g = gnk(n, k);
            CHECK(membership(g, ConeSpec(n, k)).member);
            CHECK_FALSE(membership(g, ConeSpec(n, k + 1)).member);
        }
    }
}

TEST_CASE("project_dykstra fixes members") {
    const SymMatrix g = gnk(4, 3);
    const ProjectionResult res = project_dykstra(g, ConeSpec(4, 3), 100);
    CHECK(res.point == g);
    CHECK(res.residual == 0.0);
}

TEST_CASE("project_dykstra onto the PSD cone clips the negative eigenvalue") {
    const SymMatrix g = gnk(4, 3);
    const ProjectionResult res = project_dykstra(g, ConeSpec(4, 4), 100);
    CHECK(frob_norm(g - res.point) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(membership(res.point, ConeSpec(4, 4).relaxed(10.0)).member);
}

TEST_CASE("project_dykstra with k = 1 clips the diagonal") {
    const SymMatrix m = -1.0 * SymMatrix::identity(2);
    const ProjectionResult res = project_dykstra(m, ConeSpec(2, 1), 100);
    CHECK(max_abs(res.point) <= 1e-12);
}

TEST_CASE("project_dykstra output is a relaxed member and idempotent") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const int k = 1 + static_cast<int>(rng.next() % n);
        const ConeSpec spec(n, k);
        const SymMatrix m = random_sym(n, rng, -2.0, 2.0);
        const ProjectionResult res = project_dykstra(m, spec, 2000);
        CHECK(membership(res.point, spec.relaxed(10.0)).member);
        const ProjectionResult again = project_dykstra(res.point, spec, 2000);
        CHECK(frob_norm(again.point - res.point) <= 1e-6 * std::max(1.0, frob_norm(res.point)));
    }
}

TEST_CASE("project_dykstra reports non-convergence with the best iterate") {
    try {
        project_dykstra(gnk(4, 3), ConeSpec(4, 4), 1);
        FAIL("expected ProjectionError");
    } catch (const ProjectionError& e) {
        CHECK(e.best.dim() == 4);
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("k = 1 membership constrains only the diagonal") {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, -2.0);
    m.set(0, 1, 5.0);
    const MembershipReport rep = membership(m, ConeSpec(2, 1));
    CHECK_FALSE(rep.member);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].first.indices == std::vector<int>{1});
    m.set(1, 1, 2.0);
    CHECK(membership(m, ConeSpec(2, 1)).member);
}

TEST_CASE("projection onto the PSD cone matches eigenvalue clipping") {
    // single-set Dykstra must land exactly on the analytic projection
    SplitMix64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 5);
        const SymMatrix m = random_sym(n, rng);
        const ProjectionResult res = project_dykstra(m, ConeSpec(n, n), 50);
        const EigenDecomp d = eigen_sym(m);
        double clipped = 0.0;
        for (double lam : d.values)
            if (lam < 0.0) clipped += lam * lam;
        CHECK(frob_norm(m - res.point) == doctest::Approx(std::sqrt(clipped)).epsilon(1e-8));
    }
}
