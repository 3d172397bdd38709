#pragma once

#include <utility>
#include <vector>

#include "kpsd/symmat.hpp"

namespace kpsd {

/// The pair (n, k) identifying the cone S^{n,k}_+ of symmetric n x n
/// matrices whose k x k principal submatrices are all PSD, together with
/// the tolerances used for every decision about it. k = 1 (nonnegative
/// diagonals) and k = n (the PSD cone itself) are supported endpoints.
struct ConeSpec {
    int n;
    int k;
    Tolerances tol;

    ConeSpec(int n_, int k_, Tolerances tol_ = {}) : n(n_), k(k_), tol(tol_) {
        if (n < 1) throw ArgumentError("ConeSpec: n must be >= 1");
        if (k < 1 || k > n) throw ArgumentError("ConeSpec: need 1 <= k <= n");
        tol.validate();
    }

    ConeSpec relaxed(double factor) const {
        ConeSpec s = *this;
        s.tol.eig_psd *= factor;
        return s;
    }
};

struct MembershipReport {
    bool member = false;
    std::vector<std::pair<IndexSet, double>> violations; ///< (block, min eigenvalue)
    long long blocks_checked = 0;
};

long long binomial(int n, int k);

/// All C(n,k) k-subsets of {0,...,n-1} in lexicographic order.
std::vector<IndexSet> enumerate_index_sets(int n, int k);

/// Checks every k x k principal submatrix and reports every violating
/// block, not just the first.
MembershipReport membership(const SymMatrix& m, const ConeSpec& spec);

struct ProjectionResult {
    SymMatrix point;
    double residual = 0.0;
    int sweeps = 0;
};

/// Dykstra's alternating projections over the C(n,k) block-PSD sets;
/// converges to the Frobenius-nearest point of their intersection.
/// Throws ProjectionError (carrying the best iterate) if the sweep cap is
/// reached with residual > 1e-7*||M||_F.
ProjectionResult project_dykstra(const SymMatrix& m, const ConeSpec& spec, int max_sweeps);

struct ProjectionError : NumericalError {
    ProjectionError(const std::string& what, SymMatrix best_, double residual_)
        : NumericalError(what), best(std::move(best_)), residual(residual_) {}
    SymMatrix best;
    double residual;
};

} // namespace kpsd
