#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpsd/cone.hpp"
#include "kpsd/symmat.hpp"

namespace kpsd {

enum class ExtremeReason { AllBlocksRank1, Kn1RankCondition, OracleFaceDim1 };

enum class CertKind { Perturbation2x2, RankOnePerturbation, PsdConicSplit, FaceDirection };

/// Constructive witness that M is not extreme: two cone members with
/// A + B = M and A not proportional to M.
struct DecompCertificate {
    DecompCertificate(SymMatrix a_, SymMatrix b_, CertKind kind_)
        : a(std::move(a_)), b(std::move(b_)), kind(kind_) {}

    SymMatrix a;
    SymMatrix b;
    CertKind kind;
    int i = -1;            ///< Perturbation2x2: perturbed off-diagonal entry
    int j = -1;
    std::vector<double> u; ///< RankOnePerturbation: direction of eps*uu^T
    double eps = 0.0;      ///< perturbation size; line-search step for FaceDirection
};

struct VerifyOutcome {
    bool valid = false;
    std::string reason;
};

/// Replays a certificate from scratch against M: sum within 1e-10*scale,
/// both halves members at 10x relaxed slack, A not proportional to M.
VerifyOutcome verify_certificate(const SymMatrix& m, const DecompCertificate& cert,
                                 const ConeSpec& spec);

enum class VerdictTag { NotMember, ZeroMatrix, Extreme, NotExtreme, Unknown };

/// Per-branch diagnostics of the k = n-1 decision tree.
struct Kn1Diagnostics {
    std::vector<int> block_ranks; ///< rank of M restricted to [n]\{i}, per i
    DetSign det = DetSign::Zero;
    char branch = '?'; ///< 'a'..'e'
};

struct ExtremeVerdict {
    VerdictTag tag;
    std::optional<MembershipReport> membership_report; ///< NotMember
    std::optional<ExtremeReason> reason;               ///< Extreme
    std::optional<DecompCertificate> certificate;      ///< NotExtreme
    std::optional<int> face_dim_hint;                  ///< Unknown, when known
    std::optional<Kn1Diagnostics> kn1;                 ///< k = n-1 path only
    std::optional<int> face_dimension;                 ///< oracle path only
};

/// Extreme-ray classification for M against S^{n,k}_+. Dispatch: membership,
/// zero test, then the exact tests for k = 2 and k = n-1, the rank-1
/// sufficient test otherwise; the face-dimension oracle resolves the
/// remaining 2 < k < n-1 cases when use_oracle is set, else Unknown.
ExtremeVerdict classify(const SymMatrix& m, const ConeSpec& spec, bool use_oracle);

/// Exact test for S^{n,2}_+: extreme iff every 2x2 principal block has
/// rank <= 1 (vanishing determinant at the zero band; all-zero blocks
/// count). Caller guarantees membership and M != 0.
ExtremeVerdict classify_k2(const SymMatrix& m, const Tolerances& tol);

/// Splits M across the strictly rank-2 block {i,j}: A,B = (M -+ eps*E_ij)/2
/// with eps half the largest feasible perturbation of the (i,j) entry.
DecompCertificate certify_k2(const SymMatrix& m, int i, int j, const Tolerances& tol);

/// Exact test for S^{n,n-1}_+, n >= 3, via the rank profile of the n
/// (n-1)-blocks and the sign of det(M). Caller guarantees membership and
/// M != 0. Raises AmbiguityError instead of guessing when the data sits on
/// a tolerance boundary.
ExtremeVerdict classify_kn1(const SymMatrix& m, const Tolerances& tol);

/// Rank-one perturbation certificate: A = eps*uu^T, B = M - eps*uu^T with
/// u a column of M through every rank-(n-2) block and eps half the minimum
/// of det(M_H) / (u_H^T adj(M_H) u_H) over full-rank principal blocks H.
DecompCertificate certify_rank_one_perturbation(const SymMatrix& m, const Tolerances& tol);

/// Conic split of a PSD matrix of rank >= 2 along its top eigenpair.
DecompCertificate certify_psd_split(const SymMatrix& m, const Tolerances& tol);

/// Vectors v^0..v^{n-1} with v^i zero at coordinate i and spanning the
/// kernel of M restricted to [n]\{i}; V stacks them as rows. When
/// det(M) < 0 the family is verified full rank with nonzero diagonals.
struct KernelFamily {
    std::vector<std::vector<double>> vectors;
    std::vector<std::vector<double>> V; ///< row i = vectors[i]
};

KernelFamily kernel_family(const SymMatrix& m, const Tolerances& tol);

struct SupportGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; ///< i < j, |m_ij| above the zero band
};

SupportGraph support_graph(const SymMatrix& m, const Tolerances& tol);
bool is_connected(const SupportGraph& g);

} // namespace kpsd
